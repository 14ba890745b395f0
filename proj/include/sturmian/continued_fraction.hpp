#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sturmian/errors.hpp"

namespace sturmian {

using BigInt = mpz_class;

enum class CfOrigin { ExplicitList, RealApproximation, Generator };

/// Finite prefix [a_1, ..., a_n] of a continued fraction expansion of a
/// frequency beta = [0; a_1, a_2, ...] in (0,1). All quotients are >= 1.
struct ContinuedFraction {
    std::vector<std::int64_t> quotients;
    CfOrigin origin = CfOrigin::ExplicitList;

    ContinuedFraction() = default;
    ContinuedFraction(std::vector<std::int64_t> a, CfOrigin o = CfOrigin::ExplicitList);

    int depth() const { return static_cast<int>(quotients.size()); }
    // 1-based quotient a_k, 1 <= k <= depth().
    std::int64_t a(int k) const;
};

ContinuedFraction golden_cf(int depth);
ContinuedFraction silver_cf(int depth);
ContinuedFraction precious_cf(std::int64_t a, int depth);

/// Convergent numerators/denominators extended by
///   p_{k+1} = a_{k+1} p_k + p_{k-1},  q_{k+1} = a_{k+1} q_k + q_{k-1}
/// from the seeds p_{-1}=1, p_0=0, q_{-1}=0, q_0=1. Arbitrary precision:
/// denominators grow exponentially, so the integer representation widens
/// automatically past 63 bits; q_int64() signals overflow for callers that
/// need machine integers.
class ConvergentTable {
public:
    ConvergentTable() = default;
    explicit ConvergentTable(const ContinuedFraction& cf);

    int max_level() const { return static_cast<int>(q_.size()) - 2; }
    const BigInt& p(int k) const { return p_.at(static_cast<std::size_t>(k + 1)); }
    const BigInt& q(int k) const { return q_.at(static_cast<std::size_t>(k + 1)); }
    bool fits_int64(int k) const;
    std::int64_t q_int64(int k) const;  // throws NumericError past 63 bits
    double q_double(int k) const;
    double log_q(int k) const;          // natural log, valid for any size

private:
    std::vector<BigInt> p_, q_;  // index i holds level k = i-1
};

ConvergentTable convergents(const ContinuedFraction& cf);

/// Per-level number-theoretic statistics of a prefix.
///   D_k = log(q_k)/k, C_k = (3/k) sum_{j<=k} log(a_j+2),
///   M_k = (a_1...a_k)^{1/k}, density_k = (1/k) sum_{j<=k} a_j,
///   G_k = G_{k-1} + a_k G_{k-2} with G_{-1} = G_0 = 1.
struct FrequencyStats {
    std::vector<double> D;        // D[k-1] = D_k, k = 1..n
    std::vector<double> C;
    std::vector<double> M;
    std::vector<double> density;
    std::vector<BigInt> G;        // G[k] = G_k, k = 0..n (G_{-1} = 1 implicit)
    double D_last = 0.0;          // finite-prefix estimates (last level)
    double C_last = 0.0;
    double M_last = 0.0;
    // limsup/liminf surrogates: running extrema over the last ceil(n/2) levels.
    double D_limsup = 0.0;
    double C_limsup = 0.0;
    double M_liminf = 0.0;
    int window = 0;               // number of trailing levels used
    bool bounded_density = true;  // heuristic: density not diverging over the prefix
};

FrequencyStats frequency_stats(const ContinuedFraction& cf);

/// Khintchine-type reference constants for Lebesgue-a.e. frequencies.
inline constexpr double khintchine_growth_rate = 1.1865691104156255;  // pi^2 / (12 log 2)
inline constexpr double khintchine_geometric_mean = 2.685452001065306;

enum class CfExpandStatus { Ok, RationalInput, PrecisionExhausted };

struct CfExpansion {
    ContinuedFraction cf;          // the valid prefix (may be shorter than requested)
    CfExpandStatus status = CfExpandStatus::Ok;
    int requested_depth = 0;
};

/// Exact Euclidean expansion of the dyadic rational represented by `x`.
/// Stops with PrecisionExhausted once the integer remainder falls below
/// 2^-52 times the input scale (the mantissa carries no more information),
/// or with RationalInput if the expansion terminates before that.
/// Throws ConfigError unless 0 < x < 1 and depth >= 1.
CfExpansion cf_expand(double x, int depth);

/// Reconstructs the exact rational value [0; a_1, ..., a_n] of a prefix.
mpq_class cf_value(const ContinuedFraction& cf);

/// Growth schedule for frequencies with diverging denominator growth rate:
/// a_{k+1} = max(q_k^2, min_quotients[k+1]). Seed quotients are used verbatim.
struct GrowthPolicy {
    std::vector<std::int64_t> seed = {1, 1};
    std::vector<std::int64_t> min_quotients;  // optional, 0-based over generated levels
};

/// Generates a prefix whose quotients satisfy a_{k+1} >= q_k^2 beyond the
/// seed, which forces D_k = log(q_k)/k to diverge. Throws NumericError when
/// a quotient would exceed the 63-bit width (around seven levels).
ContinuedFraction pathological_cf(const GrowthPolicy& policy, int levels);

}  // namespace sturmian
