#include "sturmian/sturmian_word.hpp"

#include <cstdlib>
#include <limits>

namespace sturmian {

SturmianPotential::SturmianPotential(ContinuedFraction cf, double coupling,
                                     std::int64_t word_cache_cap)
    : cf_(std::move(cf)), conv_(cf_), coupling_(coupling) {
    if (coupling_ < 0.0) throw ConfigError("coupling must be >= 0");

    const int n = cf_.depth();
    p_deep_ = conv_.p(n);
    q_deep_ = conv_.q(n);
    BigInt exact = q_deep_ - 2;
    max_exact_site_ = exact.fits_slong_p() && exact > 0
                          ? std::min<std::int64_t>(static_cast<std::int64_t>(exact.get_si()),
                                                   std::numeric_limits<std::int64_t>::max() / 4)
                          : std::numeric_limits<std::int64_t>::max() / 4;

    // W_0 = "0"; W_1 = 0^{a_1-1} 1; W_{k+1} = W_k^{a_{k+1}} W_{k-1}.
    words_.push_back({0});
    if (n >= 1 && conv_.fits_int64(1) && conv_.q_int64(1) <= word_cache_cap) {
        std::vector<std::uint8_t> w1(static_cast<std::size_t>(cf_.a(1)), 0);
        w1.back() = 1;
        words_.push_back(std::move(w1));
        for (int k = 1; k < n; ++k) {
            if (!conv_.fits_int64(k + 1) || conv_.q_int64(k + 1) > word_cache_cap) break;
            const std::int64_t a = cf_.a(k + 1);
            std::vector<std::uint8_t> next;
            next.reserve(static_cast<std::size_t>(conv_.q_int64(k + 1)));
            for (std::int64_t rep = 0; rep < a; ++rep)
                next.insert(next.end(), words_[static_cast<std::size_t>(k)].begin(),
                            words_[static_cast<std::size_t>(k)].end());
            next.insert(next.end(), words_[static_cast<std::size_t>(k - 1)].begin(),
                        words_[static_cast<std::size_t>(k - 1)].end());
            words_.push_back(std::move(next));
        }
    }
}

const std::vector<std::uint8_t>& SturmianPotential::word(int k) const {
    if (k < 0 || k > cached_levels())
        throw ConfigError("word level " + std::to_string(k) + " not cached");
    return words_[static_cast<std::size_t>(k)];
}

int SturmianPotential::occupation(std::int64_t n) const {
    if (std::llabs(n) > max_exact_site_)
        throw NumericError("site " + std::to_string(n) +
                           " is beyond the exact range of the cached prefix");
    // floor(n beta) == floor(n p_m / q_m) for |n| < q_m - 1.
    BigInt hi = (n + 1) * p_deep_;
    BigInt lo = n * p_deep_;
    BigInt fhi, flo;
    mpz_fdiv_q(fhi.get_mpz_t(), hi.get_mpz_t(), q_deep_.get_mpz_t());
    mpz_fdiv_q(flo.get_mpz_t(), lo.get_mpz_t(), q_deep_.get_mpz_t());
    BigInt diff = fhi - flo;
    return static_cast<int>(diff.get_si());
}

}  // namespace sturmian
