#include "sturmian/trace_map.hpp"

#include <cmath>

namespace sturmian {

namespace {

constexpr std::int64_t recursion_degree_cap = 64;

Complex chebyshev_closed_form(std::int64_t l, Complex x) {
    // x = 2 cos(theta): S_l(x) = sin((l+1) theta) / sin(theta).
    const Complex theta = std::acos(x * 0.5);
    const Complex s = std::sin(theta);
    if (std::abs(s) < 1e-12) {
        // x -> +-2: S_l(2) = l+1, S_l(-2) = (l+1)(-1)^l.
        const double sign = (std::real(x) < 0.0 && (l % 2 != 0)) ? -1.0 : 1.0;
        return Complex(sign * static_cast<double>(l + 1), 0.0);
    }
    return std::sin(static_cast<double>(l + 1) * theta) / s;
}

}  // namespace

Complex chebyshev_S(std::int64_t l, Complex x) {
    if (l < -1) throw ConfigError("chebyshev_S requires l >= -1");
    if (l == -1) return Complex(0.0, 0.0);
    if (l == 0) return Complex(1.0, 0.0);
    if (l > recursion_degree_cap) return chebyshev_closed_form(l, x);
    Complex prev(0.0, 0.0), cur(1.0, 0.0);
    for (std::int64_t j = 1; j <= l; ++j) {
        Complex next = x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double lambda_delta(double delta) {
    const double u = 1.0 + delta;
    return std::sqrt(12.0 * u * u + 8.0 * u * u * u + 4.0);
}

namespace {

bool magnitude_ok(Complex v) {
    return std::isfinite(std::real(v)) && std::isfinite(std::imag(v)) &&
           std::abs(v) < trace_overflow_cutoff;
}

}  // namespace

TraceOrbit trace_orbit(const SturmianPotential& pot, Complex z, int k_max, double delta) {
    if (k_max < 0) throw ConfigError("trace_orbit requires k_max >= 0");
    if (k_max > pot.cf().depth())
        throw ConfigError("trace_orbit level exceeds the continued fraction prefix");
    if (delta < 0.0) throw ConfigError("trace_orbit requires delta >= 0");

    TraceOrbit orbit;
    orbit.z = z;
    orbit.delta = delta;
    orbit.x.reserve(static_cast<std::size_t>(k_max) + 2);
    orbit.zs.reserve(static_cast<std::size_t>(k_max) + 1);
    orbit.x.push_back(Complex(2.0, 0.0));              // x_{-1}
    orbit.x.push_back(z);                              // x_0
    orbit.zs.push_back(z - Complex(pot.coupling()));   // z_0

    const double bound = 2.0 + delta;
    auto check_escape = [&](int level) {
        if (orbit.escape_level) return;
        const Complex xm = orbit.x_at(level - 1);
        const Complex xc = orbit.x_at(level);
        const Complex zc = orbit.z_at(level);
        if (std::abs(xm) <= bound && std::abs(xc) > bound && std::abs(zc) > bound)
            orbit.escape_level = level;
    };
    check_escape(0);

    for (int k = 0; k < k_max; ++k) {
        const std::int64_t a = pot.cf().a(k + 1);
        const Complex xk = orbit.x_at(k);
        const Complex zk = orbit.z_at(k);
        const Complex xm = orbit.x_at(k - 1);
        const Complex s_am1 = chebyshev_S(a - 1, xk);
        const Complex s_am2 = chebyshev_S(a - 2, xk);
        const Complex s_a = chebyshev_S(a, xk);
        const Complex x_next = zk * s_am1 - xm * s_am2;
        const Complex z_next = zk * s_a - xm * s_am1;
        if (!magnitude_ok(x_next) || !magnitude_ok(z_next)) {
            orbit.overflowed = true;
            break;
        }
        orbit.x.push_back(x_next);
        orbit.zs.push_back(z_next);
        check_escape(k + 1);
    }
    return orbit;
}

namespace {

inline Eigen::Matrix2cd step_matrix(Complex z, double v) {
    Eigen::Matrix2cd t;
    t << z - v, Complex(-1.0, 0.0), Complex(1.0, 0.0), Complex(0.0, 0.0);
    return t;
}

inline Eigen::Matrix2cd step_matrix_inverse(Complex z, double v) {
    Eigen::Matrix2cd t;
    t << Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(-1.0, 0.0), z - v;
    return t;
}

}  // namespace

Eigen::Matrix2cd transfer_product(const SturmianPotential& pot, std::int64_t n, Complex z) {
    Eigen::Matrix2cd f = Eigen::Matrix2cd::Identity();
    if (n >= 1) {
        for (std::int64_t m = 1; m <= n; ++m) f = step_matrix(z, pot.site_value(m)) * f;
    } else if (n <= -1) {
        for (std::int64_t m = 0; m >= n; --m) f = step_matrix_inverse(z, pot.site_value(m)) * f;
    }
    return f;
}

double ScaledTransfer::log_trace_abs() const {
    return log_scale + std::log(std::abs(matrix(0, 0) + matrix(1, 1)));
}

double ScaledTransfer::log_spectral_norm() const {
    return log_scale + std::log(spectral_norm(matrix));
}

ScaledTransfer transfer_product_scaled(const SturmianPotential& pot, std::int64_t n, Complex z) {
    ScaledTransfer f;
    f.matrix = Eigen::Matrix2cd::Identity();
    auto renormalize = [&]() {
        const double m = f.matrix.cwiseAbs().maxCoeff();
        if (m > 1e150) {
            f.matrix /= m;
            f.log_scale += std::log(m);
        }
    };
    if (n >= 1) {
        for (std::int64_t m = 1; m <= n; ++m) {
            f.matrix = step_matrix(z, pot.site_value(m)) * f.matrix;
            renormalize();
        }
    } else if (n <= -1) {
        for (std::int64_t m = 0; m >= n; --m) {
            f.matrix = step_matrix_inverse(z, pot.site_value(m)) * f.matrix;
            renormalize();
        }
    }
    return f;
}

double spectral_norm(const Eigen::Matrix2cd& m) {
    const double s = m.squaredNorm();  // Frobenius norm squared
    const double d = std::norm(m.determinant());
    const double disc = std::max(0.0, s * s - 4.0 * d);
    return std::sqrt(0.5 * (s + std::sqrt(disc)));
}

std::optional<int> escape_level_at_offset(const SturmianPotential& pot, double E, double eps,
                                          int k_max, double delta,
                                          std::vector<std::string>* warnings) {
    if (pot.coupling() <= 20.0 && warnings)
        warnings->push_back("escape criterion evaluated at V <= 20: outside the proven "
                            "coupling regime, results are heuristic");
    const TraceOrbit orbit = trace_orbit(pot, Complex(E, eps), k_max, delta);
    return orbit.escape_level;
}

}  // namespace sturmian
