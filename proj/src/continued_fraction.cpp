#include "sturmian/continued_fraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sturmian {

namespace {

void validate_quotients(const std::vector<std::int64_t>& a) {
    if (a.empty()) throw ConfigError("continued fraction prefix must contain at least one quotient");
    for (std::int64_t q : a)
        if (q < 1) throw ConfigError("continued fraction quotients must be >= 1");
}

}  // namespace

ContinuedFraction::ContinuedFraction(std::vector<std::int64_t> a, CfOrigin o)
    : quotients(std::move(a)), origin(o) {
    validate_quotients(quotients);
}

std::int64_t ContinuedFraction::a(int k) const {
    if (k < 1 || k > depth()) throw ConfigError("quotient index out of range");
    return quotients[static_cast<std::size_t>(k - 1)];
}

ContinuedFraction golden_cf(int depth) {
    return ContinuedFraction(std::vector<std::int64_t>(static_cast<std::size_t>(depth), 1));
}

ContinuedFraction silver_cf(int depth) {
    return ContinuedFraction(std::vector<std::int64_t>(static_cast<std::size_t>(depth), 2));
}

ContinuedFraction precious_cf(std::int64_t a, int depth) {
    if (a < 1) throw ConfigError("precious quotient must be >= 1");
    return ContinuedFraction(std::vector<std::int64_t>(static_cast<std::size_t>(depth), a));
}

ConvergentTable::ConvergentTable(const ContinuedFraction& cf) {
    const int n = cf.depth();
    p_.reserve(static_cast<std::size_t>(n) + 2);
    q_.reserve(static_cast<std::size_t>(n) + 2);
    p_.emplace_back(1);  // p_{-1}
    p_.emplace_back(0);  // p_0
    q_.emplace_back(0);  // q_{-1}
    q_.emplace_back(1);  // q_0
    for (int k = 1; k <= n; ++k) {
        const std::int64_t a = cf.a(k);
        p_.push_back(a * p_[p_.size() - 1] + p_[p_.size() - 2]);
        q_.push_back(a * q_[q_.size() - 1] + q_[q_.size() - 2]);
    }
}

bool ConvergentTable::fits_int64(int k) const {
    return q(k).fits_slong_p() != 0 || mpz_sizeinbase(q(k).get_mpz_t(), 2) <= 62;
}

std::int64_t ConvergentTable::q_int64(int k) const {
    const BigInt& v = q(k);
    if (mpz_sizeinbase(v.get_mpz_t(), 2) > 62)
        throw NumericError("convergent denominator exceeds the 63-bit integer width at level " +
                           std::to_string(k) + "; use the arbitrary-precision accessor");
    return static_cast<std::int64_t>(v.get_si());
}

double ConvergentTable::q_double(int k) const { return q(k).get_d(); }

double ConvergentTable::log_q(int k) const {
    signed long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, q(k).get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

ConvergentTable convergents(const ContinuedFraction& cf) { return ConvergentTable(cf); }

FrequencyStats frequency_stats(const ContinuedFraction& cf) {
    const int n = cf.depth();
    const ConvergentTable tab(cf);
    FrequencyStats st;
    st.D.reserve(static_cast<std::size_t>(n));
    st.C.reserve(static_cast<std::size_t>(n));
    st.M.reserve(static_cast<std::size_t>(n));
    st.density.reserve(static_cast<std::size_t>(n));
    st.G.reserve(static_cast<std::size_t>(n) + 1);
    st.G.emplace_back(1);  // G_0

    BigInt g_prev = 1;     // G_{-1}
    double sum_log_a2 = 0.0, sum_log_a = 0.0;
    double sum_a = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double a = static_cast<double>(cf.a(k));
        sum_log_a2 += std::log(a + 2.0);
        sum_log_a += std::log(a);
        sum_a += a;
        st.D.push_back(tab.log_q(k) / k);
        st.C.push_back(3.0 * sum_log_a2 / k);
        st.M.push_back(std::exp(sum_log_a / k));
        st.density.push_back(sum_a / k);

        BigInt g_next = st.G.back() + cf.a(k) * g_prev;
        g_prev = st.G.back();
        st.G.push_back(std::move(g_next));
    }

    st.D_last = st.D.back();
    st.C_last = st.C.back();
    st.M_last = st.M.back();
    st.window = (n + 1) / 2;
    const int first = n - st.window;  // window covers levels first+1 .. n
    st.D_limsup = *std::max_element(st.D.begin() + first, st.D.end());
    st.C_limsup = *std::max_element(st.C.begin() + first, st.C.end());
    st.M_liminf = *std::min_element(st.M.begin() + first, st.M.end());

    // Heuristic divergence flag: the running quotient average doubling over
    // the second half of the prefix marks the density as unbounded.
    const double mid = st.density[static_cast<std::size_t>(n / 2 > 0 ? n / 2 - 1 : 0)];
    st.bounded_density = !(st.density.back() > 2.0 * mid && st.density.back() > 8.0);
    return st;
}

CfExpansion cf_expand(double x, int depth) {
    if (!(x > 0.0 && x < 1.0)) throw ConfigError("cf_expand requires 0 < x < 1");
    if (depth < 1) throw ConfigError("cf_expand requires depth >= 1");

    CfExpansion out;
    out.requested_depth = depth;
    out.cf.origin = CfOrigin::RealApproximation;

    mpq_class value(x);  // exact dyadic rational of the double
    value.canonicalize();
    BigInt num = value.get_num();  // x = num/den, 0 < num < den
    BigInt den = value.get_den();

    // Remainders below num * 2^-52 carry no mantissa information.
    BigInt floor_scale = num >> 52;

    BigInt u = den, v = num;
    while (static_cast<int>(out.cf.quotients.size()) < depth) {
        if (v == 0) {
            out.status = CfExpandStatus::RationalInput;
            break;
        }
        if (v <= floor_scale && !out.cf.quotients.empty()) {
            out.status = CfExpandStatus::PrecisionExhausted;
            break;
        }
        BigInt a = u / v;
        BigInt r = u - a * v;
        if (!a.fits_slong_p())
            throw NumericError("continued fraction quotient exceeds the integer width");
        out.cf.quotients.push_back(static_cast<std::int64_t>(a.get_si()));
        u = v;
        v = r;
    }
    if (out.cf.quotients.empty())
        throw NumericError("no valid quotient could be extracted");
    return out;
}

mpq_class cf_value(const ContinuedFraction& cf) {
    // Evaluate from the tail: t_n = 1/a_n, t_{k} = 1/(a_k + t_{k+1}).
    mpq_class tail(0);
    for (int k = cf.depth(); k >= 1; --k) {
        mpq_class denom = mpq_class(cf.a(k)) + tail;
        tail = mpq_class(1) / denom;
    }
    return tail;
}

ContinuedFraction pathological_cf(const GrowthPolicy& policy, int levels) {
    if (levels < 1) throw ConfigError("pathological_cf requires levels >= 1");
    validate_quotients(policy.seed);

    ContinuedFraction cf;
    cf.origin = CfOrigin::Generator;
    BigInt q_prev = 0, q_cur = 1;  // q_{-1}, q_0
    for (int k = 1; k <= levels; ++k) {
        BigInt a;
        if (k <= static_cast<int>(policy.seed.size())) {
            a = policy.seed[static_cast<std::size_t>(k - 1)];
        } else {
            a = q_cur * q_cur;
        }
        if (static_cast<std::size_t>(k - 1) < policy.min_quotients.size())
            a = std::max(a, BigInt(policy.min_quotients[static_cast<std::size_t>(k - 1)]));
        if (mpz_sizeinbase(a.get_mpz_t(), 2) > 62)
            throw NumericError("pathological quotient a_" + std::to_string(k) +
                               " exceeds the 63-bit integer width; reduce the level count");
        cf.quotients.push_back(static_cast<std::int64_t>(a.get_si()));
        BigInt q_next = a * q_cur + q_prev;
        q_prev = q_cur;
        q_cur = q_next;
    }
    return cf;
}

}  // namespace sturmian
