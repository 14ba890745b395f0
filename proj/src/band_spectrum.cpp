#include "sturmian/band_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace sturmian {

const char* band_type_name(BandType t) {
    switch (t) {
        case BandType::I: return "I";
        case BandType::II: return "II";
        default: return "III";
    }
}

std::int64_t GenerationLabels::count(BandType t) const {
    std::int64_t n = 0;
    for (const auto& b : objects) n += (b.type == t) ? 1 : 0;
    return n;
}

double word_trace(const std::vector<std::uint8_t>& word, double V, double E) {
    // Transfer product over one period, newest factor on the left.
    double p00 = 1.0, p01 = 0.0, p10 = 0.0, p11 = 1.0;
    for (std::uint8_t letter : word) {
        const double t = E - (letter ? V : 0.0);
        const double n00 = t * p00 - p10;
        const double n01 = t * p01 - p11;
        p10 = p00;
        p11 = p01;
        p00 = n00;
        p01 = n01;
    }
    return p00 + p11;
}

namespace {

// Eigenvalues of the one-period restriction with periodic (sign=+1) or
// antiperiodic (sign=-1) boundary conditions; these are exactly the energies
// where the discriminant equals +-2.
std::vector<double> boundary_eigenvalues(const std::vector<std::uint8_t>& word, double V,
                                         double sign) {
    const int q = static_cast<int>(word.size());
    if (q == 1) return {(word[0] ? V : 0.0) + 2.0 * sign};
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(q, q);
    for (int i = 0; i < q; ++i) h(i, i) = word[static_cast<std::size_t>(i)] ? V : 0.0;
    for (int i = 0; i + 1 < q; ++i) {
        h(i, i + 1) += 1.0;
        h(i + 1, i) += 1.0;
    }
    h(0, q - 1) += sign;
    h(q - 1, 0) += sign;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("boundary eigensolver failed");
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + q);
    return out;
}

// Boundary eigenvalues are already backward-stable to ~n*eps*||H||, well
// inside the 1e-10 edge contract. Bisection only polishes within a tight,
// non-expanding bracket: bands can be as thin as ~1e-11, so a wide bracket
// would swallow whole neighboring bands and converge to the wrong crossing.
double refine_edge(const std::vector<std::uint8_t>& word, double V, double e, double tol) {
    const double t_e = word_trace(word, V, e);
    const double target = (std::abs(t_e - 2.0) <= std::abs(t_e + 2.0)) ? 2.0 : -2.0;
    auto f = [&](double x) { return word_trace(word, V, x) - target; };

    const double scale = std::max(1.0, std::abs(e));
    double lo = e, hi = e, flo = 0.0, fhi = 0.0;
    bool bracketed = false;
    for (double h : {1e-13 * scale, 1e-12 * scale, 4e-12 * scale}) {
        lo = e - h;
        hi = e + h;
        flo = f(lo);
        fhi = f(hi);
        if (flo == 0.0) return lo;
        if (fhi == 0.0) return hi;
        if ((flo < 0.0) != (fhi < 0.0)) {
            bracketed = true;
            break;
        }
    }
    if (!bracketed) return e;  // keep the eigenvalue; the certificate will judge it

    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct AssemblyFailure {
    bool failed = false;
    std::string why;
};

struct TaggedEdge {
    double value;
    int sign;  // +1: periodic restriction (trace = +2), -1: antiperiodic
};

// Certificate: every band must pair one periodic with one antiperiodic edge
// (the discriminant is monotone across a band, so its endpoints carry
// opposite boundary values), and midpoints confirm the inside/outside
// pattern wherever the interval is wide enough for the trace derivative not
// to amplify edge noise past the +-2 threshold.
AssemblyFailure verify_bands(const std::vector<std::uint8_t>& word, double V,
                             const std::vector<Band>& bands,
                             const std::vector<TaggedEdge>& edges) {
    AssemblyFailure out;
    const double slack = 1e-9;
    const double resolvable = 1e-9;
    for (std::size_t i = 0; i < bands.size(); ++i) {
        if (!(bands[i].lo <= bands[i].hi)) {
            out.failed = true;
            out.why = "inverted band interval";
            return out;
        }
        if (edges[2 * i].sign == edges[2 * i + 1].sign) {
            out.failed = true;
            out.why = "band endpoints share a boundary condition";
            return out;
        }
        if (bands[i].width() >= resolvable &&
            std::abs(word_trace(word, V, bands[i].mid())) > 2.0 + slack) {
            out.failed = true;
            out.why = "band midpoint outside |trace| <= 2";
            return out;
        }
        if (i + 1 < bands.size()) {
            const double gap = bands[i + 1].lo - bands[i].hi;
            const double gap_mid = 0.5 * (bands[i].hi + bands[i + 1].lo);
            if (gap >= resolvable && std::abs(word_trace(word, V, gap_mid)) < 2.0 - slack) {
                out.failed = true;
                out.why = "gap midpoint inside |trace| <= 2";
                return out;
            }
        }
    }
    return out;
}

}  // namespace

BandSpectrum band_edges(const SturmianPotential& pot, int level, TraceSelector selector,
                        const BandOptions& opts) {
    if (level < 0) throw ConfigError("band level must be >= 0");
    const ConvergentTable& conv = pot.convergents();
    if (level > conv.max_level())
        throw ConfigError("band level exceeds the continued fraction prefix");

    BigInt predicted = (selector == TraceSelector::X)
                           ? conv.q(level)
                           : conv.q(level) + conv.q(level - 1);
    if (!predicted.fits_slong_p() || predicted.get_si() > opts.q_cap)
        throw NumericError("cap-exceeded: period length " + predicted.get_str() +
                           " above the configured cap " + std::to_string(opts.q_cap));

    std::vector<std::uint8_t> word;
    if (selector == TraceSelector::X) {
        word = pot.word(level);
    } else if (level == 0) {
        word = {1};
    } else {
        word = pot.word(level);
        const auto& prev = pot.word(level - 1);
        word.insert(word.end(), prev.begin(), prev.end());
    }
    const double V = pot.coupling();

    std::vector<TaggedEdge> raw;
    for (double e : boundary_eigenvalues(word, V, +1.0)) raw.push_back({e, +1});
    for (double e : boundary_eigenvalues(word, V, -1.0)) raw.push_back({e, -1});

    std::vector<TaggedEdge> edges;
    auto build = [&](double tol) {
        edges.clear();
        edges.reserve(raw.size());
        for (const TaggedEdge& e : raw)
            edges.push_back({refine_edge(word, V, e.value, tol), e.sign});
        std::sort(edges.begin(), edges.end(),
                  [](const TaggedEdge& a, const TaggedEdge& b) { return a.value < b.value; });
        BandSpectrum spec;
        spec.level = level;
        spec.selector = selector;
        spec.predicted_count = static_cast<std::int64_t>(predicted.get_si());
        for (std::size_t i = 0; i + 1 < edges.size(); i += 2) {
            Band b;
            b.lo = edges[i].value;
            b.hi = edges[i + 1].value;
            b.level = level;
            b.selector = selector;
            spec.bands.push_back(b);
        }
        return spec;
    };

    BandSpectrum spec = build(opts.edge_tolerance);
    if (opts.verify) {
        AssemblyFailure fail = verify_bands(word, V, spec.bands, edges);
        if (!fail.failed &&
            static_cast<std::int64_t>(spec.bands.size()) != spec.predicted_count) {
            fail.failed = true;
            fail.why = "band count differs from the structural prediction";
        }
        if (fail.failed) {
            spec = build(std::min(opts.edge_tolerance, 1e-14));  // one retry, tighter
            AssemblyFailure again = verify_bands(word, V, spec.bands, edges);
            if (again.failed ||
                static_cast<std::int64_t>(spec.bands.size()) != spec.predicted_count)
                throw NumericError("count-mismatch at level " + std::to_string(level) + ": " +
                                   (again.failed ? again.why : fail.why));
        }
    }
    return spec;
}

namespace {

bool contains(double plo, double phi, double lo, double hi, double tol) {
    return plo - tol <= lo && hi <= phi + tol;
}

// Index of the object in `objs` (sorted by lo) containing [lo, hi], or -1.
int find_container(const std::vector<const LabeledBand*>& objs, double lo, double hi, double tol) {
    int best = -1;
    for (std::size_t i = 0; i < objs.size(); ++i) {
        if (objs[i]->lo > hi + tol) break;
        if (contains(objs[i]->lo, objs[i]->hi, lo, hi, tol)) best = static_cast<int>(i);
    }
    return best;
}

}  // namespace

GenerationLabels label_generation(const GenerationLabels& prev, const BandSpectrum& x_bands,
                                  const BandSpectrum& z_bands, const SturmianPotential& pot,
                                  const LabelOptions& opts) {
    const int g = x_bands.level;
    if (z_bands.level != g || g != prev.level + 1)
        throw ConfigError("label_generation: inconsistent levels");
    const double tol = opts.containment_tol;

    std::vector<const LabeledBand*> prev_x, prev_i;
    std::vector<int> prev_x_idx, prev_i_idx;
    for (std::size_t i = 0; i < prev.objects.size(); ++i) {
        const LabeledBand& o = prev.objects[i];
        if (o.selector == TraceSelector::X) {
            prev_x.push_back(&o);
            prev_x_idx.push_back(static_cast<int>(i));
        } else if (o.type == BandType::I) {
            prev_i.push_back(&o);
            prev_i_idx.push_back(static_cast<int>(i));
        }
    }

    GenerationLabels gen;
    gen.level = g;

    for (const Band& b : x_bands.bands) {
        LabeledBand lb;
        lb.lo = b.lo;
        lb.hi = b.hi;
        lb.level = g;
        lb.selector = TraceSelector::X;
        int host = find_container(prev_x, b.lo, b.hi, tol);
        if (host >= 0) {
            lb.type = BandType::III;
            lb.parent = prev_x_idx[static_cast<std::size_t>(host)];
            lb.word = prev_x[static_cast<std::size_t>(host)]->word + ".III";
        } else {
            host = find_container(prev_i, b.lo, b.hi, tol);
            if (host < 0)
                throw NumericError("labeling-inconsistency: level-" + std::to_string(g) +
                                   " band admits no containment type");
            lb.type = BandType::II;
            lb.parent = prev_i_idx[static_cast<std::size_t>(host)];
            lb.word = prev_i[static_cast<std::size_t>(host)]->word + ".II";
            // Containment in the |tr(M_{g-1} M_g^{-1})| <= 2 slice, via the
            // trace identity tr(AB^{-1}) = trA trB - tr(AB).
            const TraceOrbit orb = trace_orbit(pot, Complex(lb.mid(), 0.0), g, 0.0);
            const Complex t = orb.x_at(g - 1) * orb.x_at(g) - orb.z_at(g);
            if (std::abs(t) > 2.0 + 1e-6)
                throw NumericError("labeling-inconsistency: type II band outside the "
                                   "inverse-step trace slice");
        }
        gen.objects.push_back(std::move(lb));
    }

    for (const Band& b : z_bands.bands) {
        const int host = find_container(prev_x, b.lo, b.hi, tol);
        if (host < 0) continue;  // only slices inside an x-band carry type I
        LabeledBand lb;
        lb.lo = b.lo;
        lb.hi = b.hi;
        lb.level = g;
        lb.selector = TraceSelector::Z;
        lb.type = BandType::I;
        lb.parent = prev_x_idx[static_cast<std::size_t>(host)];
        lb.word = prev_x[static_cast<std::size_t>(host)]->word + ".I";
        gen.objects.push_back(std::move(lb));
    }

    std::sort(gen.objects.begin(), gen.objects.end(),
              [](const LabeledBand& a, const LabeledBand& b) { return a.lo < b.lo; });

    if (opts.verify_parent_counts) {
        const std::int64_t a = pot.cf().a(g);
        std::vector<std::vector<const LabeledBand*>> children(prev.objects.size());
        for (const LabeledBand& o : gen.objects)
            children[static_cast<std::size_t>(o.parent)].push_back(&o);
        for (std::size_t pi = 0; pi < prev.objects.size(); ++pi) {
            const BandType pt = prev.objects[pi].type;
            const auto& kids = children[pi];
            auto fail = [&](const std::string& why) {
                throw NumericError("labeling-inconsistency: level " + std::to_string(g) +
                                   " parent " + std::to_string(pi) + " (" +
                                   band_type_name(pt) + "): " + why);
            };
            if (pt == BandType::I) {
                if (kids.size() != 1 || kids[0]->type != BandType::II)
                    fail("expected a unique type II child");
                continue;
            }
            const std::int64_t want_i = (pt == BandType::II) ? a + 1 : a;
            const std::int64_t want_iii = (pt == BandType::II) ? a : a - 1;
            std::int64_t got_i = 0, got_iii = 0;
            for (const LabeledBand* k : kids) {
                if (k->type == BandType::I) ++got_i;
                else if (k->type == BandType::III) ++got_iii;
                else fail("type II child under a band parent");
            }
            if (got_i != want_i || got_iii != want_iii)
                fail("expected " + std::to_string(want_i) + " I / " + std::to_string(want_iii) +
                     " III children, found " + std::to_string(got_i) + " / " +
                     std::to_string(got_iii));
            for (std::size_t j = 0; j < kids.size(); ++j) {
                const BandType want = (j % 2 == 0) ? BandType::I : BandType::III;
                if (kids[j]->type != want) fail("children do not alternate I, III, ..., I");
            }
        }
    }
    return gen;
}

LabelingResult enumerate_and_label(const SturmianPotential& pot, int max_level,
                                   const LabelOptions& opts) {
    if (max_level < 0) throw ConfigError("enumerate_and_label requires max_level >= 0");
    const double V = pot.coupling();

    LabelingResult out;
    GenerationLabels root;
    root.level = 0;
    LabeledBand base;
    base.lo = -2.0;
    base.hi = 2.0;
    base.level = 0;
    base.selector = TraceSelector::X;
    base.type = BandType::III;
    base.word = "III";
    LabeledBand shifted;
    shifted.lo = V - 2.0;
    shifted.hi = V + 2.0;
    shifted.level = 0;
    shifted.selector = TraceSelector::Z;
    shifted.type = BandType::I;
    shifted.word = "I";
    root.objects = {base, shifted};
    std::sort(root.objects.begin(), root.objects.end(),
              [](const LabeledBand& a, const LabeledBand& b) { return a.lo < b.lo; });
    out.generations.push_back(std::move(root));

    for (int g = 1; g <= max_level; ++g) {
        const BandSpectrum xb = band_edges(pot, g, TraceSelector::X, opts.band);
        const BandSpectrum zb = band_edges(pot, g, TraceSelector::Z, opts.band);
        out.generations.push_back(
            label_generation(out.generations.back(), xb, zb, pot, opts));
    }
    return out;
}

LengthBoundMatrices length_bound_matrices(std::int64_t a_n, double V) {
    if (a_n < 1) throw ConfigError("quotient must be >= 1");
    const double c1 = 3.0 / (V - 8.0);
    const double c2 = 1.0 / (V + 5.0);
    LengthBoundMatrices m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.upper[i][j] = m.lower[i][j] = 0.0;
    const double a = static_cast<double>(a_n);
    m.upper[0][1] = std::pow(c1, a - 1.0);
    m.upper[1][0] = m.upper[1][2] = m.upper[2][0] = m.upper[2][2] = c1 / a;
    m.lower[0][1] = std::pow(c2, a - 1.0);
    const double w = c2 / ((a + 2.0) * (a + 2.0) * (a + 2.0));
    m.lower[1][0] = m.lower[1][2] = m.lower[2][0] = m.lower[2][2] = w;
    return m;
}

std::vector<BandType> parse_index_word(const std::string& word) {
    std::vector<BandType> out;
    std::stringstream ss(word);
    std::string tok;
    while (std::getline(ss, tok, '.')) {
        if (tok == "I") out.push_back(BandType::I);
        else if (tok == "II") out.push_back(BandType::II);
        else if (tok == "III") out.push_back(BandType::III);
        else throw ConfigError("bad index word letter: " + tok);
    }
    if (out.empty()) throw ConfigError("empty index word");
    return out;
}

std::pair<double, double> length_bounds(const std::string& word, const ContinuedFraction& cf,
                                        double V) {
    if (!(V > 20.0)) throw HypothesisError("length bounds require V > 20");
    const std::vector<BandType> letters = parse_index_word(word);
    const int k = static_cast<int>(letters.size()) - 1;
    if (k > cf.depth()) throw ConfigError("index word longer than the quotient prefix");
    double lo = 1.0, hi = 1.0;
    for (int j = 1; j <= k; ++j) {
        const LengthBoundMatrices m = length_bound_matrices(cf.a(j), V);
        const int r = static_cast<int>(letters[static_cast<std::size_t>(j - 1)]);
        const int c = static_cast<int>(letters[static_cast<std::size_t>(j)]);
        if (m.upper[r][c] == 0.0)
            throw NumericError("forbidden transition " +
                               std::string(band_type_name(letters[static_cast<std::size_t>(j - 1)])) +
                               " -> " +
                               std::string(band_type_name(letters[static_cast<std::size_t>(j)])) +
                               " in index word");
        lo *= m.lower[r][c];
        hi *= m.upper[r][c];
    }
    return {4.0 * lo, 4.0 * hi};
}

RadiusEnvelope radius_envelope(const GenerationLabels& gen, const ContinuedFraction& cf,
                               double V) {
    RadiusEnvelope env;
    env.inner = std::numeric_limits<double>::infinity();
    env.outer = 0.0;
    for (const LabeledBand& o : gen.objects) {
        const auto [lo, hi] = length_bounds(o.word, cf, V);
        env.inner = std::min(env.inner, lo / 4.0);
        env.outer = std::max(env.outer, hi / 4.0);
    }
    if (gen.objects.empty()) env.inner = 0.0;
    return env;
}

std::vector<CountingState> counting_recursion(const ContinuedFraction& cf, int levels, double V) {
    if (levels < 0) throw ConfigError("counting_recursion requires levels >= 0");
    if (levels > cf.depth()) throw ConfigError("counting levels exceed the quotient prefix");
    std::vector<CountingState> states;
    states.reserve(static_cast<std::size_t>(levels) + 1);
    states.push_back({BigInt(1), BigInt(0), BigInt(1), std::log(4.0)});
    for (int k = 1; k <= levels; ++k) {
        const std::int64_t a = cf.a(k);
        const CountingState& s = states.back();
        CountingState next;
        next.nI = (a + 1) * s.nII + a * s.nIII;
        next.nII = (a <= 2) ? s.nI : BigInt(0);
        next.nIII = a * s.nII + (a - 1) * s.nIII;
        next.log_eps = s.log_eps - (std::log(V + 5.0) + 3.0 * std::log(static_cast<double>(a) + 2.0));
        states.push_back(std::move(next));
    }
    return states;
}

namespace {

double log_big(const BigInt& v) {
    signed long e = 0;
    const double m = mpz_get_d_2exp(&e, v.get_mpz_t());
    return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

}  // namespace

CountingCheck verify_counting_inequalities(const std::vector<CountingState>& states) {
    CountingCheck out;
    for (std::size_t k = 0; k < states.size(); ++k) {
        const CountingState& s = states[k];
        auto fail = [&](const std::string& why) {
            out.ok = false;
            out.detail = "level " + std::to_string(k) + ": " + why;
        };
        if (s.nI == 0) { fail("nI == 0"); return out; }
        if (s.nII == 0 && s.nIII == 0) { fail("nII == nIII == 0"); return out; }
        if (k >= 1 && !(s.nI > s.nIII)) { fail("nI <= nIII"); return out; }
        BigInt threshold;
        mpz_ui_pow_ui(threshold.get_mpz_t(), 2, static_cast<unsigned long>(k / 2));
        const BigInt sum = s.nII + s.nIII;
        // The seeds force equality through level 2; strict growth holds beyond.
        if (k >= 3 ? !(sum > threshold) : !(sum >= threshold)) {
            fail("nII + nIII below 2^(k/2)");
            return out;
        }
    }
    return out;
}

double box_dimension_bound_formula(double C, double V) {
    return 0.5 * std::log(2.0) / (C + std::log(V + 5.0));
}

double prior_box_bound_formula(double M, double V) {
    const double t2 = 1.0 / (4.0 * (V + 8.0));
    const double first = std::log(2.0) / (10.0 * std::log(2.0) - 3.0 * std::log(t2));
    const double second = (std::log(M) - std::log(3.0)) / (std::log(M) - std::log(t2 / 3.0));
    return std::max(first, second);
}

namespace {

bool constant_quotients(const ContinuedFraction& cf, std::int64_t* a_out) {
    const std::int64_t a = cf.a(1);
    for (int k = 2; k <= cf.depth(); ++k)
        if (cf.a(k) != a) return false;
    *a_out = a;
    return true;
}

}  // namespace

BoxDimensionReport box_dimension_lower_bound(const ContinuedFraction& cf, double V) {
    if (!(V > 20.0)) throw HypothesisError("box dimension bound requires V > 20");
    BoxDimensionReport rep;
    rep.V = V;
    rep.depth = cf.depth();

    std::int64_t a_const = 0;
    if (constant_quotients(cf, &a_const)) {
        rep.C_used = 3.0 * std::log(static_cast<double>(a_const) + 2.0);
        rep.C_exact = true;
    } else {
        rep.C_used = frequency_stats(cf).C_limsup;
    }
    rep.closed_form = box_dimension_bound_formula(rep.C_used, V);

    const auto states = counting_recursion(cf, cf.depth(), V);
    rep.ratio.reserve(states.size() - 1);
    for (std::size_t k = 1; k < states.size(); ++k) {
        const BigInt sum = states[k].nII + states[k].nIII;
        const double num = log_big(sum) - std::log(2.0);
        rep.ratio.push_back(num / (-states[k].log_eps));
    }
    rep.ratio_last = rep.ratio.back();
    rep.window = (rep.depth + 1) / 2;
    const auto first = rep.ratio.end() - rep.window;
    rep.ratio_liminf = *std::min_element(first, rep.ratio.end());
    rep.ratio_limsup = *std::max_element(first, rep.ratio.end());
    return rep;
}

PriorBoundComparison prior_bound_comparison(const ContinuedFraction& cf, double V) {
    if (!(V > 20.0)) throw HypothesisError("bound comparison requires V > 20");
    PriorBoundComparison cmp;
    std::int64_t a_const = 0;
    if (constant_quotients(cf, &a_const)) {
        cmp.M_used = static_cast<double>(a_const);
        cmp.C_used = 3.0 * std::log(static_cast<double>(a_const) + 2.0);
    } else {
        const FrequencyStats st = frequency_stats(cf);
        cmp.M_used = st.M_liminf;
        cmp.C_used = st.C_limsup;
    }
    cmp.t2 = 1.0 / (4.0 * (V + 8.0));
    cmp.new_bound = box_dimension_bound_formula(cmp.C_used, V);
    cmp.old_bound = prior_box_bound_formula(cmp.M_used, V);
    return cmp;
}

GammaResult gamma_exponent(const ContinuedFraction& cf, double V, GammaMode mode) {
    if (!(V > 20.0)) throw HypothesisError("escape-rate exponent requires V > 20");
    if (mode == GammaMode::NoOnes)
        for (int k = 1; k <= cf.depth(); ++k)
            if (cf.a(k) == 1)
                throw ConfigError("no-ones mode requires every quotient >= 2");

    GammaResult res;
    res.mode = mode;
    res.log_c1 = std::log(3.0 / (V - 8.0));
    const ConvergentTable conv(cf);
    std::vector<double> values;
    for (int k = 1; k <= cf.depth(); ++k) {
        if (conv.q(k) < 2) continue;  // log q_k vanishes for leading quotients 1
        const double denom = (mode == GammaMode::General) ? 2.0 * conv.log_q(k) : conv.log_q(k);
        values.push_back(-static_cast<double>(k) * res.log_c1 / denom);
    }
    if (values.empty()) throw ConfigError("prefix too short for the exponent estimate");
    res.window = (static_cast<int>(values.size()) + 1) / 2;
    res.gamma = *std::max_element(values.end() - res.window, values.end());
    res.inverse_gamma = 1.0 / res.gamma;
    return res;
}

std::int64_t covering_count(const std::vector<Band>& bands, double eps) {
    if (eps <= 0.0) throw ConfigError("covering_count requires eps > 0");
    std::int64_t count = 0;
    double covered_to = -std::numeric_limits<double>::infinity();
    for (const Band& b : bands) {
        if (b.hi <= covered_to) continue;
        const double start = std::max(b.lo, covered_to);
        const double n = std::ceil((b.hi - start) / eps);
        const std::int64_t boxes = std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
        count += boxes;
        covered_to = start + static_cast<double>(boxes) * eps;
    }
    return count;
}

}  // namespace sturmian
