#pragma once

#include <cstdint>
#include <vector>

#include "sturmian/continued_fraction.hpp"

namespace sturmian {

/// Two-valued potential V(n) = (floor((n+1) beta) - floor(n beta)) * V for a
/// frequency beta given by a continued fraction prefix.
///
/// Words W_k over {0,1} are cached level by level through the substitution
///   W_0 = 0,  W_1 = 0^{a_1 - 1} 1,  W_{k+1} = W_k^{a_{k+1}} W_{k-1},
/// so |W_k| = q_k; caching stops once q_k exceeds `word_cache_cap`.
///
/// Site values are evaluated exactly through the deepest convergent: for
/// |n| < q_m - 1 the floors of n*beta and n*p_m/q_m coincide, so occupation()
/// is integer arithmetic, two-sided, with no rounding ambiguity.
class SturmianPotential {
public:
    SturmianPotential(ContinuedFraction cf, double coupling,
                      std::int64_t word_cache_cap = 2'000'000);

    const ContinuedFraction& cf() const { return cf_; }
    const ConvergentTable& convergents() const { return conv_; }
    double coupling() const { return coupling_; }

    /// Deepest k with W_k cached (q_k <= cap).
    int cached_levels() const { return static_cast<int>(words_.size()) - 1; }
    /// W_k as bytes 0/1; word(k)[i-1] is the letter at site i, 1 <= i <= q_k.
    const std::vector<std::uint8_t>& word(int k) const;

    /// Occupation letter at any site n with |n| + 1 < q_max (exact).
    int occupation(std::int64_t n) const;
    double site_value(std::int64_t n) const { return occupation(n) * coupling_; }
    /// Largest |n| for which occupation() is exact.
    std::int64_t max_exact_site() const { return max_exact_site_; }

private:
    ContinuedFraction cf_;
    ConvergentTable conv_;
    double coupling_;
    std::vector<std::vector<std::uint8_t>> words_;  // words_[k] = W_k
    std::int64_t max_exact_site_;
    BigInt p_deep_, q_deep_;
};

}  // namespace sturmian
