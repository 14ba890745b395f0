#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sturmian/band_spectrum.hpp"

namespace sturmian {

/// Finite two-sided lattice restriction of psi(n+1) + psi(n-1) + V(n) psi(n),
/// sites -L..L (site n lives at index n + L). K bounds the spectrum through
/// Gershgorin: sigma(H) in [-K+1, K-1] with K = 3 + max|V(n)|.
struct LatticeHamiltonian {
    std::int64_t L = 0;
    Eigen::VectorXd diagonal;
    double K = 4.0;

    static LatticeHamiltonian from_potential(const SturmianPotential& pot, std::int64_t L);
    static LatticeHamiltonian free_lattice(std::int64_t L);
    /// Two-sided periodic repetition of `word` aligned so sites 1..|word|
    /// carry the word itself.
    static LatticeHamiltonian from_periodic_word(const std::vector<std::uint8_t>& word, double V,
                                                 std::int64_t L);
};

enum class HorizonPolicy {
    Enforce,    // reject L < 3 max(T) + 10 up front
    MassCheck,  // run anyway, record the boundary mass for an a-posteriori check
};

struct EvolveOptions {
    HorizonPolicy policy = HorizonPolicy::Enforce;
    double boundary_mass_tol = 1e-8;
};

/// Abel-averaged site occupations
///   a(n,T) = (2/T) int_0^inf e^{-2t/T} |<e^{-itH} delta_1, delta_n>|^2 dt
/// computed in closed form from the eigenpairs (E_j, psi_j):
///   a(n,T) = sum_{j,l} psi_j(1) psi_j(n) psi_l(1) psi_l(n) / (1 + (T (E_j - E_l)/2)^2).
struct TransportRun {
    std::int64_t L = 0;
    std::vector<double> T;
    Eigen::MatrixXd site_prob;            // (2L+1) x |T|; row n+L, column t
    std::vector<double> moment;           // <X^2>_T = sum n^2 a(n,T)
    std::vector<double> unitarity_defect; // |sum_n a(n,T) - 1|
    std::vector<double> boundary_mass;    // mass within 10 sites of the box edge
    std::vector<std::string> warnings;

    double a(std::int64_t n, int ti) const {
        return site_prob(static_cast<Eigen::Index>(n + L), ti);
    }
    double outside(double N, int ti) const;        // P(N,T) = sum_{|n|>N}
    double outside_right(double N, int ti) const;  // sum_{n>N}
    double outside_left(double N, int ti) const;   // sum_{n<-N}
};

TransportRun evolve_and_average(const LatticeHamiltonian& h, const std::vector<double>& T_list,
                                const EvolveOptions& opts = {});

/// Least-squares slope of log <X^2>_T against log T.
double moment_exponent(const TransportRun& run);

struct FitOptions {
    double slope_threshold = 10.0;  // S(alpha) < threshold counts as finite
    double min_decades = 3.0;
    double min_probability = 1e-280;
};

struct AlphaFitPoint {
    double alpha = 0.0;
    double S_hat = 0.0;  // -slope of log P(T^alpha - 2, T) vs log T
    bool finite = false;
    int points = 0;
};

struct ExponentFit {
    std::vector<AlphaFitPoint> table;
    double alpha_u_hat = 0.0;  // largest grid alpha with finite S below threshold
    double slope_threshold = 10.0;
    double T_min = 0.0, T_max = 0.0;
    std::vector<std::string> warnings;
};

/// Finite-time surrogate of the outside-probability exponents over an alpha
/// grid. Negative N (alpha near 0) clips P to 1. Throws ConfigError
/// ("insufficient-decades") when the T window is narrower than min_decades.
ExponentFit exponent_fit(const TransportRun& run, const std::vector<double>& alpha_grid,
                         const FitOptions& opts = {});

struct DtOptions {
    int grid_size = 2048;          // uniform energy grid over [-K, K], K = V + 3
    double delta = 0.1;
    double d_knob = 1.0;           // unpinned envelope constant, reported as configured
    std::int64_t scale_budget = 200000;  // largest transfer length allowed
};

/// Outside-probability bound evaluation at time scale T:
///   k(T): unique k with q_{k-1}^gamma / d <= T <= q_k^gamma / d,
///   N(T) = q_{k(T) + floor(sqrt(k(T)))},
/// followed by the energy integrals of
///   ( max_{1 <= q_k <= N} || M_k(E + i/T) ||^2 )^{-1}
/// over [-K, K] (right: forward products; left: inverse products).
struct DtBound {
    double T = 0.0;
    int k_T = 0;
    BigInt N_T;
    double gamma_used = 0.0;
    double K = 0.0;
    int grid_size = 0;
    bool sandwich_ok = false;
    double right_integral = 0.0, left_integral = 0.0;
    double t3_right = 0.0, t3_left = 0.0;  // T^3 * integral
    std::vector<std::string> warnings;
};

DtBound dt_upper_bound_integral(const SturmianPotential& pot, double T, const GammaResult& gamma,
                                const DtOptions& opts = {});

struct BoundsOptions {
    std::optional<double> exact_D;  // known denominator growth rate
    std::optional<double> exact_C;
    std::optional<double> exact_M;
};

/// Closed-form transport bounds. Upper: 2D / log((V-8)/3), halved exponent
/// constant dropped when no quotient equals 1; Khintchine reference value;
/// constant-quotient specialization log(a + omega)/log((V-8)/3). Lower:
/// 0.5 log2 / (C + log(V+5)), applicable for bounded-density prefixes.
/// Requires V > 20.
struct ClosedFormBounds {
    double V = 0.0;
    double D_used = 0.0;
    bool D_exact = false;
    double upper_general = 0.0;
    std::optional<double> upper_no_ones;
    double upper_khintchine_ref = 0.0;
    std::optional<double> upper_precious;
    double C_used = 0.0;
    bool C_exact = false;
    double lower = 0.0;
    bool lower_applicable = false;
    std::vector<std::string> warnings;
};

ClosedFormBounds closed_form_bounds(const ContinuedFraction& cf, double V,
                                    const BoundsOptions& opts = {});

struct DemoOptions {
    double V = 24.0;
    int period_level = 2;  // even, so the periodic alignment matches site 0
    std::vector<double> T_list = {100.0, 200.0, 400.0, 600.0};
    std::int64_t L = 1810;
};

/// Side-by-side run of a generated frequency against its periodic
/// approximant of period q_n. The two potentials agree exactly on the first
/// q_{n+1} sites; within that window both moment exponents are reported.
struct BallisticDemo {
    std::int64_t period = 0;            // q_n
    std::int64_t agreement_checked = 0; // sites compared letter by letter
    bool prefix_agrees = false;
    double beta_sturmian = 0.0, beta_periodic = 0.0, difference = 0.0;
    std::vector<double> moment_sturmian, moment_periodic, T;
    std::vector<std::string> warnings;
};

BallisticDemo ballistic_demo(const ContinuedFraction& pathological, const DemoOptions& opts = {});

}  // namespace sturmian
