#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sturmian/sturmian_word.hpp"

namespace sturmian {

using Complex = std::complex<double>;

/// Second-kind Chebyshev polynomial S_l, S_{-1} = 0, S_0 = 1,
/// S_{l+1}(x) = x S_l(x) - S_{l-1}(x). Large degrees switch to the closed
/// form sin((l+1) theta)/sin(theta) with x = 2 cos(theta).
Complex chebyshev_S(std::int64_t l, Complex x);

/// lambda(delta) = [12(1+delta)^2 + 8(1+delta)^3 + 4]^{1/2}; the escape
/// machinery at margin delta requires V > max(20, lambda(2 delta)).
double lambda_delta(double delta);

/// Orbit of the trace map at spectral parameter z:
///   x_{k+1} = z_k S_{a_{k+1}-1}(x_k) - x_{k-1} S_{a_{k+1}-2}(x_k)
///   z_{k+1} = z_k S_{a_{k+1}}(x_k)   - x_{k-1} S_{a_{k+1}-1}(x_k)
/// seeded with x_{-1} = 2, x_0 = z, z_0 = z - V. x_k is the trace of the
/// transfer matrix over q_k sites, z_k the trace over q_{k-1} + q_k sites.
struct TraceOrbit {
    Complex z;
    double delta = 0.1;
    std::vector<Complex> x;   // x[0] = x_{-1}, x[k+1] = x_k
    std::vector<Complex> zs;  // zs[k] = z_k
    std::optional<int> escape_level;  // first N with |x_{N-1}| <= 2+delta,
                                      // |x_N| > 2+delta, |z_N| > 2+delta
    bool overflowed = false;  // truncated once magnitudes pass the cutoff
    int levels() const { return static_cast<int>(zs.size()) - 1; }
    Complex x_at(int k) const { return x.at(static_cast<std::size_t>(k + 1)); }
    Complex z_at(int k) const { return zs.at(static_cast<std::size_t>(k)); }
};

inline constexpr double trace_overflow_cutoff = 1e300;

TraceOrbit trace_orbit(const SturmianPotential& pot, Complex z, int k_max, double delta = 0.1);

/// Transfer matrix product F(n,z): one-step factors T(m,z) = [[z - V(m), -1], [1, 0]],
///   F(n,z) = T(n) ... T(1)  (n >= 1),  Id (n = 0),  T(n)^{-1} ... T(0)^{-1}  (n <= -1).
/// Inverses use the exact det-1 formula.
Eigen::Matrix2cd transfer_product(const SturmianPotential& pot, std::int64_t n, Complex z);

/// Log-scaled product for ranges where entries overflow: F = matrix * exp(log_scale).
struct ScaledTransfer {
    Eigen::Matrix2cd matrix;
    double log_scale = 0.0;
    Complex trace() const { return (matrix(0, 0) + matrix(1, 1)) * std::exp(log_scale); }
    double log_trace_abs() const;
    double log_spectral_norm() const;
};

ScaledTransfer transfer_product_scaled(const SturmianPotential& pot, std::int64_t n, Complex z);

/// Spectral norm of a 2x2 complex matrix (closed form from singular values).
double spectral_norm(const Eigen::Matrix2cd& m);

/// Runs the orbit at z = E + i eps and reports the first escape level, or
/// nullopt if the orbit stays bounded through k_max. Outside the proven
/// coupling regime (V <= 20) a warning is appended instead of failing.
std::optional<int> escape_level_at_offset(const SturmianPotential& pot, double E, double eps,
                                          int k_max, double delta = 0.1,
                                          std::vector<std::string>* warnings = nullptr);

}  // namespace sturmian
