#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sturmian/band_spectrum.hpp"
#include "sturmian/continued_fraction.hpp"
#include "sturmian/io_util.hpp"
#include "sturmian/transport.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace sturmian;

namespace {

constexpr const char* kVersion = "1.0.0";

struct RunContext {
    std::string command;
    std::vector<std::string> argv;  // original arguments for manifest replay
    fs::path out_dir = ".";
    std::vector<std::string> warnings;
    std::vector<std::string> artifacts;
    json config = json::object();

    fs::path path(const std::string& name) const { return out_dir / name; }
    void note_artifact(const fs::path& p) { artifacts.push_back(p.filename().string()); }
};

void write_manifest(const RunContext& ctx, double wall_seconds) {
    json m;
    m["command"] = ctx.command;
    m["argv"] = ctx.argv;
    m["config"] = ctx.config;
    m["versions"] = {{"sturmian", kVersion}};
    m["wall_time_s"] = wall_seconds;
    m["warnings"] = ctx.warnings;
    m["artifacts"] = ctx.artifacts;
    write_text((ctx.out_dir / (ctx.command + "_manifest.json")).string(), m.dump(2) + "\n");
}

struct BetaSpec {
    std::string spec = "golden";
    int depth = 40;

    ContinuedFraction resolve(std::vector<std::string>* warnings) const {
        if (depth < 1) throw ConfigError("--depth must be >= 1");
        if (spec == "golden") return golden_cf(depth);
        if (spec == "silver") return silver_cf(depth);
        if (spec.rfind("precious:", 0) == 0) {
            const std::int64_t a = std::stoll(spec.substr(9));
            return precious_cf(a, depth);
        }
        if (spec.rfind("list:", 0) == 0) {
            std::vector<std::int64_t> quotients;
            std::stringstream ss(spec.substr(5));
            std::string tok;
            while (std::getline(ss, tok, ',')) quotients.push_back(std::stoll(tok));
            return ContinuedFraction(quotients);
        }
        if (spec.rfind("real:", 0) == 0) {
            const double x = std::stod(spec.substr(5));
            const CfExpansion e = cf_expand(x, depth);
            if (e.status == CfExpandStatus::RationalInput)
                throw ConfigError("rational input detected: the expansion terminates after " +
                                  std::to_string(e.cf.depth()) + " quotients");
            if (e.status == CfExpandStatus::PrecisionExhausted && warnings)
                warnings->push_back("floating precision exhausted after " +
                                    std::to_string(e.cf.depth()) + " of " +
                                    std::to_string(depth) + " quotients; using the valid prefix");
            return e.cf;
        }
        throw ConfigError("unknown frequency spec '" + spec +
                          "' (use golden|silver|precious:a|list:a1,a2,...|real:0.xxxx)");
    }
};

std::string selector_name(TraceSelector s) { return s == TraceSelector::X ? "x" : "z"; }

json cf_to_json(const ContinuedFraction& cf) {
    json j = json::array();
    for (std::int64_t a : cf.quotients) j.push_back(a);
    return j;
}

// ---------------------------------------------------------------------------

void run_cf(RunContext& ctx, const BetaSpec& beta) {
    const ContinuedFraction cf = beta.resolve(&ctx.warnings);
    const ConvergentTable tab(cf);
    const FrequencyStats st = frequency_stats(cf);

    json out;
    out["quotients"] = cf_to_json(cf);
    json qs = json::array(), ps = json::array();
    for (int k = 0; k <= cf.depth(); ++k) {
        qs.push_back(tab.q(k).get_str());
        ps.push_back(tab.p(k).get_str());
    }
    out["q"] = qs;
    out["p"] = ps;
    json stats;
    stats["D"] = st.D;
    stats["C"] = st.C;
    stats["M"] = st.M;
    stats["density"] = st.density;
    stats["D_last"] = st.D_last;
    stats["D_limsup"] = st.D_limsup;
    stats["C_limsup"] = st.C_limsup;
    stats["M_liminf"] = st.M_liminf;
    stats["window"] = st.window;
    stats["bounded_density"] = st.bounded_density;
    stats["khintchine_D"] = khintchine_growth_rate;
    stats["khintchine_M"] = khintchine_geometric_mean;
    out["stats"] = stats;

    const fs::path p = ctx.path("cf.json");
    write_text(p.string(), out.dump(2) + "\n");
    ctx.note_artifact(p);

    std::cout << "quotients:";
    for (std::int64_t a : cf.quotients) std::cout << " " << a;
    std::cout << "\nD_last = " << format_double(st.D_last)
              << "  C_limsup = " << format_double(st.C_limsup)
              << "  M_liminf = " << format_double(st.M_liminf) << "\n";
}

void run_spectrum(RunContext& ctx, const BetaSpec& beta, double V, int level,
                  const std::string& selector, std::int64_t q_cap) {
    if (V <= 20.0)
        ctx.warnings.push_back("V <= 20: outside the proven coupling regime, enumeration is raw");
    const ContinuedFraction cf = beta.resolve(&ctx.warnings);
    SturmianPotential pot(cf, V);
    const TraceSelector sel = (selector == "z") ? TraceSelector::Z : TraceSelector::X;
    BandOptions opts;
    opts.q_cap = q_cap;
    const BandSpectrum spec = band_edges(pot, level, sel, opts);

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < spec.bands.size(); ++i) {
        const Band& b = spec.bands[i];
        rows.push_back({std::to_string(level), selector_name(sel), std::to_string(i),
                        format_double(b.lo), format_double(b.hi), format_double(b.width())});
    }
    const fs::path p = ctx.path("spectrum.csv");
    write_csv(p.string(), {"level", "selector", "index", "lo", "hi", "width"}, rows);
    ctx.note_artifact(p);

    json out;
    out["level"] = level;
    out["selector"] = selector_name(sel);
    out["count"] = spec.bands.size();
    out["predicted_count"] = spec.predicted_count;
    const fs::path pj = ctx.path("spectrum.json");
    write_text(pj.string(), out.dump(2) + "\n");
    ctx.note_artifact(pj);

    std::cout << spec.bands.size() << " bands at level " << level << " (predicted "
              << spec.predicted_count << ")\n";
    for (const Band& b : spec.bands)
        std::cout << "  [" << format_double(b.lo) << ", " << format_double(b.hi) << "]\n";
}

void run_bands(RunContext& ctx, const BetaSpec& beta, double V, int levels, std::int64_t q_cap) {
    if (V <= 20.0) throw HypothesisError("band labeling report requires V > 20");
    const ContinuedFraction cf = beta.resolve(&ctx.warnings);
    SturmianPotential pot(cf, V);
    LabelOptions opts;
    opts.band.q_cap = q_cap;
    const LabelingResult res = enumerate_and_label(pot, levels, opts);

    std::vector<std::vector<std::string>> rows;
    json report = json::array();
    for (const GenerationLabels& gen : res.generations) {
        int sandwich_pass = 0;
        double min_margin = std::numeric_limits<double>::infinity();
        for (const LabeledBand& b : gen.objects) {
            rows.push_back({std::to_string(b.level), selector_name(b.selector),
                            format_double(b.lo), format_double(b.hi), band_type_name(b.type),
                            b.word});
            const auto [lo, hi] = length_bounds(b.word, cf, V);
            const bool ok = b.width() >= lo - 2e-10 && b.width() <= hi + 2e-10;
            sandwich_pass += ok ? 1 : 0;
            min_margin = std::min({min_margin, b.width() - lo, hi - b.width()});
        }
        json lvl;
        lvl["level"] = gen.level;
        lvl["n_I"] = gen.count(BandType::I);
        lvl["n_II"] = gen.count(BandType::II);
        lvl["n_III"] = gen.count(BandType::III);
        lvl["length_window_pass"] = sandwich_pass;
        lvl["objects"] = gen.objects.size();
        lvl["min_margin"] = min_margin;
        if (gen.level >= 1) {
            const RadiusEnvelope env = radius_envelope(gen, cf, V);
            lvl["radius_inner"] = env.inner;
            lvl["radius_outer"] = env.outer;
        }
        report.push_back(lvl);
    }
    const fs::path p = ctx.path("bands.csv");
    write_csv(p.string(), {"level", "selector", "lo", "hi", "type", "index_word"}, rows);
    ctx.note_artifact(p);
    const fs::path pj = ctx.path("bands_report.json");
    write_text(pj.string(), json{{"levels", report}}.dump(2) + "\n");
    ctx.note_artifact(pj);

    std::cout << "labeled " << rows.size() << " bands through level " << levels << "\n";
}

void run_boxdim(RunContext& ctx, const BetaSpec& beta, double V, int enum_level,
                std::int64_t q_cap) {
    const ContinuedFraction cf = beta.resolve(&ctx.warnings);
    const BoxDimensionReport rep = box_dimension_lower_bound(cf, V);
    const PriorBoundComparison cmp = prior_bound_comparison(cf, V);

    json out;
    out["closed_form_bound"] = rep.closed_form;
    out["counting_ratio"] = rep.ratio_liminf;
    out["counting_ratio_last"] = rep.ratio_last;
    out["counting_ratio_limsup"] = rep.ratio_limsup;
    out["old_bound"] = cmp.old_bound;
    out["window"] = rep.window;
    out["depth"] = rep.depth;
    out["C_used"] = rep.C_used;
    out["C_exact"] = rep.C_exact;
    out["M_used"] = cmp.M_used;
    out["t2"] = cmp.t2;
    if (!rep.C_exact)
        ctx.warnings.push_back("C is a finite-prefix limsup surrogate over the last " +
                               std::to_string(rep.window) + " levels");

    if (enum_level > 0) {
        SturmianPotential pot(cf, V);
        BandOptions opts;
        opts.q_cap = q_cap;
        const BandSpectrum spec = band_edges(pot, enum_level, TraceSelector::X, opts);
        const auto states = counting_recursion(cf, enum_level, V);
        const double eps = std::exp(states.back().log_eps);
        const std::int64_t boxes = covering_count(spec.bands, eps);
        json cover;
        cover["level"] = enum_level;
        cover["eps"] = eps;
        cover["boxes"] = boxes;
        cover["half_count_survivors"] = BigInt(states.back().nII + states.back().nIII).get_str();
        out["covering_check"] = cover;
    }
    const fs::path p = ctx.path("boxdim.json");
    write_text(p.string(), out.dump(2) + "\n");
    ctx.note_artifact(p);

    std::cout << "closed-form lower bound " << format_double(rep.closed_form)
              << ", counting ratio (liminf surrogate) " << format_double(rep.ratio_liminf)
              << ", previous bound " << format_double(cmp.old_bound) << "\n";
}

void attach_bounds(json& out, const ContinuedFraction& cf, double V,
                   std::vector<std::string>* warnings) {
    const ClosedFormBounds b = closed_form_bounds(cf, V);
    json jb;
    jb["V"] = b.V;
    jb["D_used"] = b.D_used;
    jb["D_exact"] = b.D_exact;
    jb["upper_general"] = b.upper_general;
    if (b.upper_no_ones) jb["upper_no_ones"] = *b.upper_no_ones;
    jb["upper_khintchine_ref"] = b.upper_khintchine_ref;
    if (b.upper_precious) jb["upper_precious"] = *b.upper_precious;
    jb["C_used"] = b.C_used;
    jb["C_exact"] = b.C_exact;
    jb["lower"] = b.lower;
    jb["lower_applicable"] = b.lower_applicable;
    out["bounds"] = jb;
    if (warnings) warnings->insert(warnings->end(), b.warnings.begin(), b.warnings.end());
}

void run_bounds(RunContext& ctx, const BetaSpec& beta, double V) {
    const ContinuedFraction cf = beta.resolve(&ctx.warnings);
    json out;
    attach_bounds(out, cf, V, &ctx.warnings);
    const fs::path p = ctx.path("bounds.json");
    write_text(p.string(), out.dump(2) + "\n");
    ctx.note_artifact(p);
    std::cout << out["bounds"].dump(2) << "\n";
}

void run_transport(RunContext& ctx, const BetaSpec& beta, double V, std::int64_t L,
                   std::vector<double> T_list, bool allow_short, double alpha_max,
                   double alpha_step, double min_decades, double slope_threshold) {
    if (T_list.empty()) throw ConfigError("--T requires at least one time scale");
    std::sort(T_list.begin(), T_list.end());
    if (V <= 20.0 && V != 0.0)
        ctx.warnings.push_back("V <= 20: raw simulation outside the proven coupling regime");
    const ContinuedFraction cf = beta.resolve(&ctx.warnings);
    SturmianPotential pot(cf, V);
    const LatticeHamiltonian h = LatticeHamiltonian::from_potential(pot, L);

    EvolveOptions eopts;
    eopts.policy = allow_short ? HorizonPolicy::MassCheck : HorizonPolicy::Enforce;
    const TransportRun run = evolve_and_average(h, T_list, eopts);
    ctx.warnings.insert(ctx.warnings.end(), run.warnings.begin(), run.warnings.end());

    {
        std::vector<std::vector<std::string>> rows;
        for (std::int64_t n = -L; n <= L; ++n)
            for (std::size_t ti = 0; ti < run.T.size(); ++ti)
                rows.push_back({std::to_string(n), format_double(run.T[ti]),
                                format_double(run.a(n, static_cast<int>(ti)))});
        const fs::path p = ctx.path("a.csv");
        write_csv(p.string(), {"n", "T", "a"}, rows);
        ctx.note_artifact(p);
    }
    {
        std::vector<std::vector<std::string>> rows;
        for (std::int64_t N = 0; N <= L; ++N)
            for (std::size_t ti = 0; ti < run.T.size(); ++ti) {
                const int t = static_cast<int>(ti);
                rows.push_back({std::to_string(N), format_double(run.T[ti]),
                                format_double(run.outside(static_cast<double>(N), t)),
                                format_double(run.outside_left(static_cast<double>(N), t)),
                                format_double(run.outside_right(static_cast<double>(N), t))});
            }
        const fs::path p = ctx.path("p.csv");
        write_csv(p.string(), {"N", "T", "P", "P_left", "P_right"}, rows);
        ctx.note_artifact(p);
    }
    {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t ti = 0; ti < run.T.size(); ++ti)
            rows.push_back({format_double(run.T[ti]), format_double(run.moment[ti])});
        const fs::path p = ctx.path("moment.csv");
        write_csv(p.string(), {"T", "moment"}, rows);
        ctx.note_artifact(p);
    }

    json out;
    out["L"] = L;
    out["T"] = run.T;
    out["moment"] = run.moment;
    out["unitarity_defect"] = run.unitarity_defect;
    out["boundary_mass"] = run.boundary_mass;
    out["moment_exponent"] = moment_exponent(run);

    if (run.T.size() >= 3) {
        std::vector<double> grid;
        for (double a = 0.0; a <= alpha_max + 1e-12; a += alpha_step) grid.push_back(a);
        FitOptions fopts;
        fopts.min_decades = min_decades;
        fopts.slope_threshold = slope_threshold;
        const ExponentFit fit = exponent_fit(run, grid, fopts);
        json jfit;
        jfit["alpha_u_hat"] = fit.alpha_u_hat;
        jfit["slope_threshold"] = fit.slope_threshold;
        jfit["T_min"] = fit.T_min;
        jfit["T_max"] = fit.T_max;
        json table = json::array();
        for (const AlphaFitPoint& pt : fit.table) {
            json row;
            row["alpha"] = pt.alpha;
            if (std::isfinite(pt.S_hat)) row["S_hat"] = pt.S_hat;
            else row["S_hat"] = "inf";
            row["finite"] = pt.finite;
            row["points"] = pt.points;
            table.push_back(row);
        }
        jfit["table"] = table;
        out["exponent_fit"] = jfit;
        ctx.warnings.push_back("exponents fitted over the finite window [" +
                               format_double(fit.T_min) + ", " + format_double(fit.T_max) + "]");
    } else {
        ctx.warnings.push_back("fewer than three time scales: exponent fit skipped");
    }

    if (V > 20.0) attach_bounds(out, cf, V, &ctx.warnings);
    else ctx.warnings.push_back("closed-form bounds not attached (V <= 20)");

    const fs::path p = ctx.path("run.json");
    write_text(p.string(), out.dump(2) + "\n");
    ctx.note_artifact(p);
    std::cout << "moment exponent " << format_double(out["moment_exponent"].get<double>())
              << " over T in [" << format_double(run.T.front()) << ", "
              << format_double(run.T.back()) << "]\n";
}

void run_dtbound(RunContext& ctx, const BetaSpec& beta, double V, std::vector<double> T_list,
                 int grid, double delta, double d_knob) {
    if (T_list.empty()) throw ConfigError("--T requires at least one time scale");
    std::sort(T_list.begin(), T_list.end());
    const ContinuedFraction cf = beta.resolve(&ctx.warnings);
    SturmianPotential pot(cf, V);
    const GammaResult gamma = gamma_exponent(cf, V, GammaMode::General);

    DtOptions opts;
    opts.grid_size = grid;
    opts.delta = delta;
    opts.d_knob = d_knob;

    json rows = json::array();
    std::vector<double> lt, lv;
    for (double T : T_list) {
        const DtBound b = dt_upper_bound_integral(pot, T, gamma, opts);
        json row;
        row["T"] = b.T;
        row["k_T"] = b.k_T;
        row["N_T"] = b.N_T.get_str();
        row["sandwich_ok"] = b.sandwich_ok;
        row["right_integral"] = b.right_integral;
        row["left_integral"] = b.left_integral;
        row["t3_right"] = b.t3_right;
        row["t3_left"] = b.t3_left;
        rows.push_back(row);
        lt.push_back(std::log(T));
        lv.push_back(std::log(b.t3_right));
    }
    json out;
    out["gamma"] = gamma.gamma;
    out["inverse_gamma"] = gamma.inverse_gamma;
    out["d_knob"] = d_knob;
    out["delta"] = delta;
    out["grid_size"] = grid;
    out["K"] = V + 3.0;
    out["rows"] = rows;
    if (lt.size() >= 2) {
        const double n = static_cast<double>(lt.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lt.size(); ++i) {
            sx += lt[i];
            sy += lv[i];
            sxx += lt[i] * lt[i];
            sxy += lt[i] * lv[i];
        }
        out["t3_right_loglog_slope"] = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    ctx.warnings.push_back("envelope constant d set to " + format_double(d_knob) +
                           " (not pinned by theory); results scale with it");

    const fs::path p = ctx.path("dtbound.json");
    write_text(p.string(), out.dump(2) + "\n");
    ctx.note_artifact(p);
    std::cout << out.dump(2) << "\n";
}

void run_orbit(RunContext& ctx, const BetaSpec& beta, double V, double z_re, double z_im,
               int k_max, double delta) {
    const ContinuedFraction cf = beta.resolve(&ctx.warnings);
    SturmianPotential pot(cf, V);
    const TraceOrbit orbit =
        trace_orbit(pot, Complex(z_re, z_im), std::min(k_max, cf.depth()), delta);
    std::vector<std::vector<std::string>> rows;
    for (int k = 0; k <= orbit.levels(); ++k) {
        const bool escaped = orbit.escape_level && k >= *orbit.escape_level;
        rows.push_back({std::to_string(k), format_double(std::real(orbit.x_at(k))),
                        format_double(std::imag(orbit.x_at(k))),
                        format_double(std::real(orbit.z_at(k))),
                        format_double(std::imag(orbit.z_at(k))), escaped ? "1" : "0"});
    }
    const fs::path p = ctx.path("orbit.csv");
    write_csv(p.string(), {"k", "re_x", "im_x", "re_z", "im_z", "escaped"}, rows);
    ctx.note_artifact(p);
    if (orbit.escape_level) std::cout << "escape at level " << *orbit.escape_level << "\n";
    else std::cout << "no escape through level " << orbit.levels() << "\n";
    if (orbit.overflowed) ctx.warnings.push_back("orbit truncated at the overflow cutoff");
}

void run_demo(RunContext& ctx, double V, std::vector<double> T_list, std::int64_t L,
              int period_level) {
    if (T_list.empty()) throw ConfigError("--T requires at least one time scale");
    std::sort(T_list.begin(), T_list.end());

    GrowthPolicy policy;
    // Widen the level-(n+1) agreement window so the whole lattice sits inside.
    SturmianPotential probe(pathological_cf(policy, period_level), 1.0);
    const std::int64_t q_n = probe.convergents().q_int64(period_level);
    policy.min_quotients.assign(static_cast<std::size_t>(period_level + 1), 0);
    policy.min_quotients[static_cast<std::size_t>(period_level)] = (L + 2) / q_n + 1;
    const ContinuedFraction cf = pathological_cf(policy, period_level + 2);

    DemoOptions opts;
    opts.V = V;
    opts.T_list = T_list;
    opts.L = L;
    opts.period_level = period_level;
    const BallisticDemo demo = ballistic_demo(cf, opts);
    ctx.warnings.insert(ctx.warnings.end(), demo.warnings.begin(), demo.warnings.end());

    json out;
    out["quotients"] = cf_to_json(cf);
    out["period"] = demo.period;
    out["agreement_checked_sites"] = demo.agreement_checked;
    out["prefix_agrees"] = demo.prefix_agrees;
    out["beta_sturmian"] = demo.beta_sturmian;
    out["beta_periodic"] = demo.beta_periodic;
    out["difference"] = demo.difference;
    out["T"] = demo.T;
    out["moment_sturmian"] = demo.moment_sturmian;
    out["moment_periodic"] = demo.moment_periodic;
    const fs::path p = ctx.path("demo.json");
    write_text(p.string(), out.dump(2) + "\n");
    ctx.note_artifact(p);
    std::cout << "moment exponents: generated " << format_double(demo.beta_sturmian)
              << ", periodic " << format_double(demo.beta_periodic) << " (difference "
              << format_double(demo.difference) << ")\n";
}

int dispatch(const std::vector<std::string>& args);

int run_from_manifest(const std::string& path, const std::string& out_override) {
    const json m = json::parse(read_text(path));
    std::vector<std::string> args = m.at("argv").get<std::vector<std::string>>();
    if (!out_override.empty())
        for (std::size_t i = 0; i + 1 < args.size(); ++i)
            if (args[i] == "--out-dir") args[i + 1] = out_override;
    return dispatch(args);
}

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"spectra, band combinatorics, dimension bounds, and transport exponents "
                 "for one-dimensional discrete Schrodinger operators with Sturmian potentials"};
    app.require_subcommand(0, 1);

    std::string from_manifest, manifest_out_dir;
    app.add_option("--from-manifest", from_manifest, "replay a previous run's manifest");
    app.add_option("--manifest-out-dir", manifest_out_dir,
                   "override --out-dir when replaying a manifest");

    RunContext ctx;
    ctx.argv = args;
    std::string out_dir = ".";
    std::uint64_t seed = 0;

    BetaSpec beta;
    double V = 24.0;
    auto add_common = [&](CLI::App* cmd, bool with_V = true) {
        cmd->add_option("--beta", beta.spec,
                        "frequency: golden|silver|precious:a|list:a1,a2,...|real:0.xxxx");
        cmd->add_option("--depth", beta.depth, "continued fraction prefix length");
        cmd->add_option("--out-dir", out_dir, "artifact directory");
        cmd->add_option("--seed", seed, "seed recorded for sampled checks");
        if (with_V) cmd->add_option("--V", V, "coupling constant");
    };

    CLI::App* c_cf = app.add_subcommand("cf", "expand a frequency and report its statistics");
    add_common(c_cf, false);

    int level = 1;
    std::string selector = "x";
    std::int64_t q_cap = 1000;
    CLI::App* c_spec = app.add_subcommand("spectrum", "enumerate approximant bands");
    add_common(c_spec);
    c_spec->add_option("--level", level, "approximant level");
    c_spec->add_option("--selector", selector, "trace polynomial: x or z");
    c_spec->add_option("--q-cap", q_cap, "largest admissible period length");

    int levels = 6;
    CLI::App* c_bands = app.add_subcommand("bands", "label bands and check length windows");
    add_common(c_bands);
    c_bands->add_option("--levels", levels, "deepest generation to label");
    c_bands->add_option("--q-cap", q_cap, "largest admissible period length");

    int enum_level = 6;
    CLI::App* c_box = app.add_subcommand("boxdim", "box-dimension lower bound report");
    add_common(c_box);
    c_box->add_option("--enum-level", enum_level,
                      "level for the direct covering check (0 = skip)");
    c_box->add_option("--q-cap", q_cap, "largest admissible period length");

    std::int64_t L = 800;
    std::vector<double> T_list;
    bool allow_short = false;
    double alpha_max = 1.2, alpha_step = 0.02, min_decades = 3.0, slope_threshold = 10.0;
    CLI::App* c_tr = app.add_subcommand("transport", "time evolution and exponent fits");
    add_common(c_tr);
    c_tr->add_option("--L", L, "lattice half-width");
    c_tr->add_option("--T", T_list, "time scales")->delimiter(',');
    c_tr->add_flag("--allow-short-lattice", allow_short,
                   "replace the ballistic horizon guard by a boundary-mass check");
    c_tr->add_option("--alpha-max", alpha_max, "largest alpha in the fit grid");
    c_tr->add_option("--alpha-step", alpha_step, "alpha grid step");
    c_tr->add_option("--min-decades", min_decades, "required log10 span of the T window");
    c_tr->add_option("--slope-threshold", slope_threshold, "finiteness cutoff for S(alpha)");

    int grid = 2048;
    double delta = 0.1, d_knob = 1.0;
    CLI::App* c_dt = app.add_subcommand("dtbound", "transfer-norm outside-probability bound");
    add_common(c_dt);
    c_dt->add_option("--T", T_list, "time scales")->delimiter(',');
    c_dt->add_option("--grid", grid, "energy grid size");
    c_dt->add_option("--delta", delta, "escape margin");
    c_dt->add_option("--d-knob", d_knob, "unpinned envelope constant");

    CLI::App* c_bounds = app.add_subcommand("bounds", "closed-form transport bounds");
    add_common(c_bounds);

    double z_re = 0.0, z_im = 0.0;
    int k_max = 20;
    CLI::App* c_orbit = app.add_subcommand("orbit", "dump a trace-map orbit");
    add_common(c_orbit);
    c_orbit->add_option("--z-re", z_re, "real part of the spectral parameter");
    c_orbit->add_option("--z-im", z_im, "imaginary part of the spectral parameter");
    c_orbit->add_option("--kmax", k_max, "deepest level");
    c_orbit->add_option("--delta", delta, "escape margin");

    int period_level = 2;
    CLI::App* c_demo =
        app.add_subcommand("demo-ballistic", "generated frequency vs periodic approximant");
    add_common(c_demo);
    c_demo->add_option("--T", T_list, "time scales")->delimiter(',');
    c_demo->add_option("--L", L, "lattice half-width");
    c_demo->add_option("--period-level", period_level, "approximant level (even)");

    std::vector<const char*> argv_c;
    argv_c.push_back("sturmian");
    for (const auto& a : args) argv_c.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv_c.size()), argv_c.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (!from_manifest.empty()) {
        try {
            return run_from_manifest(from_manifest, manifest_out_dir);
        } catch (const std::exception& e) {
            std::cerr << "manifest replay failed: " << e.what() << "\n";
            return 2;
        }
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help() << "\n";
        return 2;
    }

    const auto started = std::chrono::steady_clock::now();
    try {
        ctx.out_dir = out_dir;
        fs::create_directories(ctx.out_dir);
        {  // all paths must be writable before any computation starts
            const fs::path probe = ctx.out_dir / ".write_probe";
            write_text(probe.string(), "");
            fs::remove(probe);
        }
        ctx.config["beta"] = beta.spec;
        ctx.config["depth"] = beta.depth;
        ctx.config["seed"] = seed;

        if (app.got_subcommand(c_cf)) {
            ctx.command = "cf";
            run_cf(ctx, beta);
        } else if (app.got_subcommand(c_spec)) {
            ctx.command = "spectrum";
            ctx.config["V"] = V;
            ctx.config["level"] = level;
            ctx.config["selector"] = selector;
            ctx.config["q_cap"] = q_cap;
            run_spectrum(ctx, beta, V, level, selector, q_cap);
        } else if (app.got_subcommand(c_bands)) {
            ctx.command = "bands";
            ctx.config["V"] = V;
            ctx.config["levels"] = levels;
            ctx.config["q_cap"] = q_cap;
            run_bands(ctx, beta, V, levels, q_cap);
        } else if (app.got_subcommand(c_box)) {
            ctx.command = "boxdim";
            ctx.config["V"] = V;
            ctx.config["enum_level"] = enum_level;
            run_boxdim(ctx, beta, V, enum_level, q_cap);
        } else if (app.got_subcommand(c_tr)) {
            ctx.command = "transport";
            ctx.config["V"] = V;
            ctx.config["L"] = L;
            ctx.config["T"] = T_list;
            ctx.config["allow_short_lattice"] = allow_short;
            ctx.config["alpha_max"] = alpha_max;
            ctx.config["alpha_step"] = alpha_step;
            ctx.config["min_decades"] = min_decades;
            ctx.config["slope_threshold"] = slope_threshold;
            run_transport(ctx, beta, V, L, T_list, allow_short, alpha_max, alpha_step,
                          min_decades, slope_threshold);
        } else if (app.got_subcommand(c_dt)) {
            ctx.command = "dtbound";
            ctx.config["V"] = V;
            ctx.config["T"] = T_list;
            ctx.config["grid"] = grid;
            ctx.config["delta"] = delta;
            ctx.config["d_knob"] = d_knob;
            run_dtbound(ctx, beta, V, T_list, grid, delta, d_knob);
        } else if (app.got_subcommand(c_bounds)) {
            ctx.command = "bounds";
            ctx.config["V"] = V;
            run_bounds(ctx, beta, V);
        } else if (app.got_subcommand(c_orbit)) {
            ctx.command = "orbit";
            ctx.config["V"] = V;
            ctx.config["z_re"] = z_re;
            ctx.config["z_im"] = z_im;
            ctx.config["kmax"] = k_max;
            ctx.config["delta"] = delta;
            run_orbit(ctx, beta, V, z_re, z_im, k_max, delta);
        } else if (app.got_subcommand(c_demo)) {
            ctx.command = "demo-ballistic";
            ctx.config["V"] = V;
            ctx.config["T"] = T_list;
            ctx.config["L"] = L;
            ctx.config["period_level"] = period_level;
            run_demo(ctx, V, T_list, L, period_level);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return 4;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 3;
    }

    for (const std::string& w : ctx.warnings) std::cerr << "warning: " << w << "\n";
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_manifest(ctx, wall);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dispatch(args);
}
