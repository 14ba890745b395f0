#include "sturmian/transport.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace sturmian {

LatticeHamiltonian LatticeHamiltonian::from_potential(const SturmianPotential& pot,
                                                      std::int64_t L) {
    if (L < 1) throw ConfigError("lattice half-width must be >= 1");
    if (L + 1 > pot.max_exact_site())
        throw ConfigError("lattice exceeds the exact range of the frequency prefix");
    LatticeHamiltonian h;
    h.L = L;
    h.diagonal.resize(2 * L + 1);
    double vmax = 0.0;
    for (std::int64_t n = -L; n <= L; ++n) {
        const double v = pot.site_value(n);
        h.diagonal(static_cast<Eigen::Index>(n + L)) = v;
        vmax = std::max(vmax, std::abs(v));
    }
    h.K = 3.0 + vmax;
    return h;
}

LatticeHamiltonian LatticeHamiltonian::free_lattice(std::int64_t L) {
    if (L < 1) throw ConfigError("lattice half-width must be >= 1");
    LatticeHamiltonian h;
    h.L = L;
    h.diagonal = Eigen::VectorXd::Zero(2 * L + 1);
    h.K = 3.0;
    return h;
}

LatticeHamiltonian LatticeHamiltonian::from_periodic_word(const std::vector<std::uint8_t>& word,
                                                          double V, std::int64_t L) {
    if (L < 1) throw ConfigError("lattice half-width must be >= 1");
    if (word.empty()) throw ConfigError("periodic word must be nonempty");
    const std::int64_t q = static_cast<std::int64_t>(word.size());
    LatticeHamiltonian h;
    h.L = L;
    h.diagonal.resize(2 * L + 1);
    double vmax = 0.0;
    for (std::int64_t n = -L; n <= L; ++n) {
        const std::int64_t idx = ((n - 1) % q + q) % q;  // site 1 -> word[0]
        const double v = word[static_cast<std::size_t>(idx)] ? V : 0.0;
        h.diagonal(static_cast<Eigen::Index>(n + L)) = v;
        vmax = std::max(vmax, std::abs(v));
    }
    h.K = 3.0 + vmax;
    return h;
}

double TransportRun::outside(double N, int ti) const {
    double sum = 0.0;
    for (std::int64_t n = -L; n <= L; ++n)
        if (std::abs(static_cast<double>(n)) > N) sum += a(n, ti);
    return sum;
}

double TransportRun::outside_right(double N, int ti) const {
    double sum = 0.0;
    for (std::int64_t n = -L; n <= L; ++n)
        if (static_cast<double>(n) > N) sum += a(n, ti);
    return sum;
}

double TransportRun::outside_left(double N, int ti) const {
    double sum = 0.0;
    for (std::int64_t n = -L; n <= L; ++n)
        if (static_cast<double>(n) < -N) sum += a(n, ti);
    return sum;
}

TransportRun evolve_and_average(const LatticeHamiltonian& h, const std::vector<double>& T_list,
                                const EvolveOptions& opts) {
    if (T_list.empty()) throw ConfigError("empty time grid");
    for (double t : T_list)
        if (!(t > 0.0)) throw ConfigError("time scales must be positive");
    const double t_max = *std::max_element(T_list.begin(), T_list.end());
    if (opts.policy == HorizonPolicy::Enforce && h.L < 3.0 * t_max + 10.0)
        throw ConfigError("horizon-violated: lattice half-width " + std::to_string(h.L) +
                          " below the ballistic guard 3*max(T)+10");

    const Eigen::Index M = h.diagonal.size();
    Eigen::MatrixXd ham = Eigen::MatrixXd::Zero(M, M);
    ham.diagonal() = h.diagonal;
    for (Eigen::Index i = 0; i + 1 < M; ++i) {
        ham(i, i + 1) = 1.0;
        ham(i + 1, i) = 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ham);
    if (es.info() != Eigen::Success) throw NumericError("lattice eigensolver failed");
    const Eigen::VectorXd& energies = es.eigenvalues();
    const Eigen::MatrixXd& vecs = es.eigenvectors();  // column j = psi_j

    // Site 1 amplitudes scale each eigenvector column.
    const Eigen::Index origin = static_cast<Eigen::Index>(h.L + 1);
    Eigen::MatrixXd scaled = vecs;
    for (Eigen::Index j = 0; j < M; ++j) scaled.col(j) *= vecs(origin, j);

    TransportRun run;
    run.L = h.L;
    run.T = T_list;
    run.site_prob.resize(M, static_cast<Eigen::Index>(T_list.size()));
    run.moment.resize(T_list.size());
    run.unitarity_defect.resize(T_list.size());
    run.boundary_mass.resize(T_list.size());

    Eigen::MatrixXd kernel(M, M);
    for (std::size_t ti = 0; ti < T_list.size(); ++ti) {
        const double T = T_list[ti];
        for (Eigen::Index j = 0; j < M; ++j) {
            for (Eigen::Index l = 0; l <= j; ++l) {
                const double x = 0.5 * T * (energies(j) - energies(l));
                const double v = 1.0 / (1.0 + x * x);
                kernel(j, l) = v;
                kernel(l, j) = v;
            }
        }
        const Eigen::MatrixXd mixed = scaled * kernel;  // (M x M)
        Eigen::VectorXd a = (mixed.cwiseProduct(scaled)).rowwise().sum();
        a = a.cwiseMax(0.0);  // clip -0/rounding dust
        run.site_prob.col(static_cast<Eigen::Index>(ti)) = a;

        double total = 0.0, m2 = 0.0, edge = 0.0;
        for (std::int64_t n = -h.L; n <= h.L; ++n) {
            const double an = a(static_cast<Eigen::Index>(n + h.L));
            total += an;
            m2 += static_cast<double>(n) * static_cast<double>(n) * an;
            if (std::llabs(n) >= h.L - 10) edge += an;
        }
        run.moment[ti] = m2;
        run.unitarity_defect[ti] = std::abs(total - 1.0);
        run.boundary_mass[ti] = edge;
        if (opts.policy == HorizonPolicy::MassCheck && edge > opts.boundary_mass_tol)
            run.warnings.push_back("boundary mass " + std::to_string(edge) + " at T = " +
                                   std::to_string(T) + " exceeds " +
                                   std::to_string(opts.boundary_mass_tol));
    }
    return run;
}

namespace {

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

double moment_exponent(const TransportRun& run) {
    if (run.T.size() < 2) throw ConfigError("moment fit needs at least two time scales");
    std::vector<double> lt, lm;
    for (std::size_t i = 0; i < run.T.size(); ++i) {
        lt.push_back(std::log(run.T[i]));
        lm.push_back(std::log(std::max(run.moment[i], 1e-300)));
    }
    return fit_slope(lt, lm);
}

ExponentFit exponent_fit(const TransportRun& run, const std::vector<double>& alpha_grid,
                         const FitOptions& opts) {
    if (run.T.size() < 3) throw ConfigError("exponent fit needs at least three time scales");
    const double t_min = *std::min_element(run.T.begin(), run.T.end());
    const double t_max = *std::max_element(run.T.begin(), run.T.end());
    if (std::log10(t_max / t_min) + 1e-9 < opts.min_decades)
        throw ConfigError("insufficient-decades: fit window spans " +
                          std::to_string(std::log10(t_max / t_min)) + " decades, needs " +
                          std::to_string(opts.min_decades));

    ExponentFit fit;
    fit.slope_threshold = opts.slope_threshold;
    fit.T_min = t_min;
    fit.T_max = t_max;
    fit.alpha_u_hat = 0.0;
    for (double alpha : alpha_grid) {
        AlphaFitPoint pt;
        pt.alpha = alpha;
        std::vector<double> lt, lp;
        bool censored = false;
        for (std::size_t i = 0; i < run.T.size(); ++i) {
            const double N = std::pow(run.T[i], alpha) - 2.0;
            const double P = (N < 0.0) ? 1.0 : run.outside(N, static_cast<int>(i));
            if (P < opts.min_probability) {
                censored = true;
                continue;
            }
            lt.push_back(std::log(run.T[i]));
            lp.push_back(std::log(P));
        }
        pt.points = static_cast<int>(lt.size());
        if (pt.points >= 3 && !censored) {
            pt.S_hat = -fit_slope(lt, lp);
            pt.finite = pt.S_hat < opts.slope_threshold;
        } else {
            pt.S_hat = std::numeric_limits<double>::infinity();
            pt.finite = false;
        }
        if (pt.finite) fit.alpha_u_hat = std::max(fit.alpha_u_hat, alpha);
        fit.table.push_back(pt);
    }
    return fit;
}

DtBound dt_upper_bound_integral(const SturmianPotential& pot, double T, const GammaResult& gamma,
                                const DtOptions& opts) {
    if (!(T > 1.0)) throw ConfigError("time scale must exceed 1");
    if (pot.coupling() <= 20.0)
        throw HypothesisError("transfer-norm bound evaluation requires V > 20");

    DtBound out;
    out.T = T;
    out.gamma_used = gamma.gamma;
    out.grid_size = opts.grid_size;
    const ConvergentTable& conv = pot.convergents();
    const double log_dT = std::log(opts.d_knob * T);

    int k = -1;
    for (int j = 1; j <= conv.max_level(); ++j) {
        if (gamma.gamma * conv.log_q(j) >= log_dT) {
            k = j;
            break;
        }
    }
    if (k < 0)
        throw NumericError("scale-overflow: prefix too short; largest feasible T = " +
                           std::to_string(std::exp(gamma.gamma * conv.log_q(conv.max_level())) /
                                          opts.d_knob));
    out.k_T = k;
    out.sandwich_ok = gamma.gamma * conv.log_q(k - 1) <= log_dT + 1e-12 &&
                      log_dT <= gamma.gamma * conv.log_q(k) + 1e-12;

    const int deep = k + static_cast<int>(std::floor(std::sqrt(static_cast<double>(k))));
    if (deep > conv.max_level())
        throw NumericError("scale-overflow: N(T) level " + std::to_string(deep) +
                           " beyond the prefix depth " + std::to_string(conv.max_level()));
    out.N_T = conv.q(deep);
    if (!out.N_T.fits_slong_p() || out.N_T.get_si() > opts.scale_budget)
        throw NumericError("scale-overflow: N(T) = " + out.N_T.get_str() +
                           " above the transfer budget");
    const std::int64_t n_max = static_cast<std::int64_t>(out.N_T.get_si());

    // Snapshot scales: q_k <= N(T).
    std::vector<std::int64_t> scales;
    for (int j = 1; j <= conv.max_level(); ++j) {
        if (!conv.fits_int64(j)) break;
        const std::int64_t q = conv.q_int64(j);
        if (q > n_max) break;
        scales.push_back(q);
    }

    out.K = pot.coupling() + 3.0;
    const double eps = 1.0 / T;
    const int G = opts.grid_size;
    const double h = 2.0 * out.K / static_cast<double>(G - 1);

    auto integrate = [&](bool right_side) {
        double sum = 0.0;
        for (int gi = 0; gi < G; ++gi) {
            const double E = -out.K + h * static_cast<double>(gi);
            const Complex z(E, eps);
            ScaledTransfer f;
            f.matrix = Eigen::Matrix2cd::Identity();
            double best_log_sq = -std::numeric_limits<double>::infinity();
            std::size_t next_scale = 0;
            auto snapshot = [&](std::int64_t sites_done) {
                while (next_scale < scales.size() && scales[next_scale] == sites_done) {
                    best_log_sq = std::max(best_log_sq, 2.0 * f.log_spectral_norm());
                    ++next_scale;
                }
            };
            if (right_side) {
                for (std::int64_t m = 1; m <= n_max; ++m) {
                    Eigen::Matrix2cd step;
                    step << z - pot.site_value(m), Complex(-1.0, 0.0), Complex(1.0, 0.0),
                        Complex(0.0, 0.0);
                    f.matrix = step * f.matrix;
                    const double mx = f.matrix.cwiseAbs().maxCoeff();
                    if (mx > 1e150) {
                        f.matrix /= mx;
                        f.log_scale += std::log(mx);
                    }
                    snapshot(m);
                }
            } else {
                for (std::int64_t m = 0; m >= -n_max; --m) {
                    Eigen::Matrix2cd step;
                    step << Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(-1.0, 0.0),
                        z - pot.site_value(m);
                    f.matrix = step * f.matrix;
                    const double mx = f.matrix.cwiseAbs().maxCoeff();
                    if (mx > 1e150) {
                        f.matrix /= mx;
                        f.log_scale += std::log(mx);
                    }
                    snapshot(-m);
                }
            }
            const double integrand = std::exp(-best_log_sq);  // norms >= 1, so <= 1
            sum += (gi == 0 || gi == G - 1) ? 0.5 * integrand : integrand;
        }
        return sum * h;
    };

    out.right_integral = integrate(true);
    out.left_integral = integrate(false);
    out.t3_right = T * T * T * out.right_integral;
    out.t3_left = T * T * T * out.left_integral;
    return out;
}

ClosedFormBounds closed_form_bounds(const ContinuedFraction& cf, double V,
                                    const BoundsOptions& opts) {
    if (!(V > 20.0)) throw HypothesisError("closed-form bounds require V > 20");
    ClosedFormBounds out;
    out.V = V;

    bool constant = true;
    const std::int64_t a0 = cf.a(1);
    bool has_one = false;
    for (int k = 1; k <= cf.depth(); ++k) {
        if (cf.a(k) != a0) constant = false;
        if (cf.a(k) == 1) has_one = true;
    }

    const FrequencyStats st = frequency_stats(cf);
    if (opts.exact_D) {
        out.D_used = *opts.exact_D;
        out.D_exact = true;
    } else if (constant) {
        // q_{k+1}/q_k converges to a + omega with omega = [0; a, a, ...].
        const double a = static_cast<double>(a0);
        const double omega = 0.5 * (std::sqrt(a * a + 4.0) - a);
        out.D_used = std::log(a + omega);
        out.D_exact = true;
    } else {
        out.D_used = st.D_limsup;
        out.warnings.push_back("growth rate D estimated from a finite prefix (window " +
                               std::to_string(st.window) + " levels)");
    }

    const double denom = std::log((V - 8.0) / 3.0);
    out.upper_general = 2.0 * out.D_used / denom;
    if (!has_one) out.upper_no_ones = out.D_used / denom;
    out.upper_khintchine_ref = 2.0 * khintchine_growth_rate / denom;
    if (constant && a0 >= 2) {
        const double a = static_cast<double>(a0);
        const double omega = 0.5 * (std::sqrt(a * a + 4.0) - a);
        out.upper_precious = std::log(a + omega) / denom;
    }

    if (opts.exact_C) {
        out.C_used = *opts.exact_C;
        out.C_exact = true;
    } else if (constant) {
        out.C_used = 3.0 * std::log(static_cast<double>(a0) + 2.0);
        out.C_exact = true;
    } else {
        out.C_used = st.C_limsup;
        out.warnings.push_back("band-length statistic C estimated from a finite prefix");
    }
    out.lower = box_dimension_bound_formula(out.C_used, V);
    out.lower_applicable = st.bounded_density;
    if (!out.lower_applicable)
        out.warnings.push_back("quotient density diverges along the prefix: the dynamical "
                               "lower bound does not apply");
    return out;
}

BallisticDemo ballistic_demo(const ContinuedFraction& pathological, const DemoOptions& opts) {
    const int n = opts.period_level;
    if (n < 1 || n % 2 != 0)
        throw ConfigError("period level must be a positive even integer (site-0 alignment)");
    if (pathological.depth() < n + 1)
        throw ConfigError("pathological prefix too short for the requested period level");

    SturmianPotential pot(pathological, opts.V);
    const ConvergentTable& conv = pot.convergents();
    if (!conv.fits_int64(n + 1))
        throw NumericError("agreement window exceeds the integer width");
    const std::int64_t window = conv.q_int64(n + 1);
    const double t_max = *std::max_element(opts.T_list.begin(), opts.T_list.end());
    if (opts.L + 1 > window)
        throw ConfigError("window-violated: lattice half-width " + std::to_string(opts.L) +
                          " exceeds the q_{n+1} agreement window " + std::to_string(window));
    if (opts.L < 3.0 * t_max + 10.0)
        throw ConfigError("window-violated: lattice too small for the largest time scale");

    BallisticDemo demo;
    demo.period = conv.q_int64(n);
    demo.T = opts.T_list;

    // Letter-by-letter comparison of the length-q_{n+1} prefix with the
    // periodic repetition of W_n (capped by the word cache).
    const auto& w_n = pot.word(n);
    std::int64_t check = window;
    if (n + 1 <= pot.cached_levels()) {
        const auto& w_next = pot.word(n + 1);
        check = static_cast<std::int64_t>(w_next.size());
        demo.prefix_agrees = true;
        for (std::int64_t i = 0; i < check; ++i) {
            const std::uint8_t periodic = w_n[static_cast<std::size_t>(i % demo.period)];
            if (w_next[static_cast<std::size_t>(i)] != periodic) {
                demo.prefix_agrees = false;
                break;
            }
        }
    } else {
        check = std::min<std::int64_t>(window, pot.max_exact_site());
        demo.prefix_agrees = true;
        for (std::int64_t i = 1; i <= check; ++i) {
            const std::uint8_t periodic = w_n[static_cast<std::size_t>((i - 1) % demo.period)];
            if (pot.occupation(i) != periodic) {
                demo.prefix_agrees = false;
                break;
            }
        }
    }
    demo.agreement_checked = check;
    if (!demo.prefix_agrees)
        throw NumericError("substitution prefix disagrees with its periodic approximant");

    const LatticeHamiltonian h_sturmian = LatticeHamiltonian::from_potential(pot, opts.L);
    const LatticeHamiltonian h_periodic =
        LatticeHamiltonian::from_periodic_word(w_n, opts.V, opts.L);

    EvolveOptions eopts;
    eopts.policy = HorizonPolicy::Enforce;
    const TransportRun run_s = evolve_and_average(h_sturmian, opts.T_list, eopts);
    const TransportRun run_p = evolve_and_average(h_periodic, opts.T_list, eopts);

    demo.moment_sturmian = run_s.moment;
    demo.moment_periodic = run_p.moment;
    demo.beta_sturmian = moment_exponent(run_s);
    demo.beta_periodic = moment_exponent(run_p);
    demo.difference = std::abs(demo.beta_sturmian - demo.beta_periodic);
    demo.warnings.insert(demo.warnings.end(), run_s.warnings.begin(), run_s.warnings.end());
    demo.warnings.insert(demo.warnings.end(), run_p.warnings.begin(), run_p.warnings.end());
    return demo;
}

}  // namespace sturmian
