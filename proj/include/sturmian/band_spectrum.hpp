#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sturmian/trace_map.hpp"

namespace sturmian {

/// Hierarchical band classification across three consecutive approximant
/// levels: at level k, type I bands live in the z_k-spectrum inside a band of
/// the x_{k-1}-spectrum; type II/III bands live in the x_k-spectrum inside a
/// gap / a band of the x_{k-1}-spectrum respectively.
enum class BandType { I, II, III };

const char* band_type_name(BandType t);

/// Which trace polynomial defines a spectrum slice at level k:
/// X -> x_k (trace over q_k sites), Z -> z_k (trace over q_k + q_{k-1} sites).
enum class TraceSelector { X, Z };

struct Band {
    double lo = 0.0, hi = 0.0;
    int level = 0;
    TraceSelector selector = TraceSelector::X;
    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
};

struct BandSpectrum {
    int level = 0;
    TraceSelector selector = TraceSelector::X;
    std::vector<Band> bands;        // sorted, pairwise disjoint
    std::int64_t predicted_count = 0;  // q_k for X, q_k + q_{k-1} for Z
};

struct BandOptions {
    std::int64_t q_cap = 1000;       // refuse levels with longer period words
    double edge_tolerance = 1e-12;   // bisection stop (absolute)
    bool verify = true;              // midpoint + count certificate
};

/// Discriminant of the length-q periodic approximant over `word` at energy E
/// (trace of the transfer product across one period).
double word_trace(const std::vector<std::uint8_t>& word, double V, double E);

/// All maximal intervals with |trace| <= 2. Band edges come from the
/// periodic/antiperiodic restrictions of the approximant (their eigenvalues
/// are exactly the roots of trace = +-2) and are then polished by bisection.
/// Errors: cap-exceeded, count-mismatch (verification certificate failed).
BandSpectrum band_edges(const SturmianPotential& pot, int level, TraceSelector selector,
                        const BandOptions& opts = {});

struct LabeledBand {
    double lo = 0.0, hi = 0.0;
    int level = 0;
    TraceSelector selector = TraceSelector::X;
    BandType type = BandType::III;
    int parent = -1;        // index into the previous generation
    std::string word;       // dot-separated type letters from level 0
    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
};

struct GenerationLabels {
    int level = 0;
    std::vector<LabeledBand> objects;  // sorted by lo
    std::int64_t count(BandType t) const;
};

struct LabelOptions {
    BandOptions band;
    double containment_tol = 1e-8;
    bool verify_parent_counts = true;  // exact per-parent child combinatorics
};

/// Labels one generation against its predecessor.
/// Throws NumericError("labeling-inconsistency ...") when a band admits no
/// containment-based type or the per-parent counts break the alternation law.
GenerationLabels label_generation(const GenerationLabels& prev, const BandSpectrum& x_bands,
                                  const BandSpectrum& z_bands, const SturmianPotential& pot,
                                  const LabelOptions& opts = {});

struct LabelingResult {
    std::vector<GenerationLabels> generations;  // index = level
};

LabelingResult enumerate_and_label(const SturmianPotential& pot, int max_level,
                                   const LabelOptions& opts = {});

/// Per-level 3x3 transition weights bounding band lengths along an index word;
/// rows are parent types, columns child types, built from a_n with
/// c1 = 3/(V-8) (upper, P) and c2 = 1/(V+5) (lower, Q).
struct LengthBoundMatrices {
    double upper[3][3];
    double lower[3][3];
};
LengthBoundMatrices length_bound_matrices(std::int64_t a_n, double V);

/// (4 L_word(Q), 4 L_word(P)): guaranteed length window for a band whose
/// index word is `word` ("III.I.II" style). Requires V > 20.
/// Throws NumericError on a zero-weight (forbidden) transition.
std::pair<double, double> length_bounds(const std::string& word, const ContinuedFraction& cf,
                                        double V);

std::vector<BandType> parse_index_word(const std::string& word);

/// Smallest / largest chained weights over the enumerated words of one
/// generation; the spectrum slice at that level is pinched between disc
/// unions of these two radii around the trace zeros (unit constants).
struct RadiusEnvelope {
    double inner = 0.0;  // inf over words of L(Q)
    double outer = 0.0;  // sup over words of L(P)
};
RadiusEnvelope radius_envelope(const GenerationLabels& gen, const ContinuedFraction& cf, double V);

/// Counting state at level k: how many type I/II/III bands of length at least
///   eps_k = 4 prod_{j<=k} (V+5)^{-1} (a_j+2)^{-3}
/// survive. Exact integer recursion:
///   n_{k+1,I}  = (a_{k+1}+1) n_{k,II} + a_{k+1} n_{k,III}
///   n_{k+1,II} = [a_{k+1} <= 2] n_{k,I}
///   n_{k+1,III}= a_{k+1} n_{k,II} + (a_{k+1}-1) n_{k,III}
/// seeded by (1, 0, 1).
struct CountingState {
    BigInt nI, nII, nIII;
    double log_eps = 0.0;  // log eps_k, exact sum of logs
};

std::vector<CountingState> counting_recursion(const ContinuedFraction& cf, int levels, double V);

/// Checks the recursion's structural inequalities at every level:
/// n_I != 0; n_II or n_III != 0; n_I > n_III (k >= 1);
/// n_II + n_III > 2^{floor(k/2)} for k >= 3 (>= with equality allowed below,
/// where the seeds make the strict form unattainable).
struct CountingCheck {
    bool ok = true;
    std::string detail;
};
CountingCheck verify_counting_inequalities(const std::vector<CountingState>& states);

// Closed-form dimension bounds ------------------------------------------------

/// 0.5 log 2 / (C + log(V+5)).
double box_dimension_bound_formula(double C, double V);

/// Earlier Hausdorff-type bound:
/// max{ log2 / (10 log2 - 3 log t2), (log M - log 3)/(log M - log(t2/3)) },
/// t2 = 1/(4(V+8)).
double prior_box_bound_formula(double M, double V);

struct BoxDimensionReport {
    double V = 0.0;
    double closed_form = 0.0;
    double C_used = 0.0;
    bool C_exact = false;
    std::vector<double> ratio;         // log(0.5 (n_II+n_III)) / (-log eps_k)
    double ratio_last = 0.0;
    double ratio_liminf = 0.0;         // running min over the trailing window
    double ratio_limsup = 0.0;
    int depth = 0, window = 0;
};

/// Closed-form bound plus the empirical counting ratio it lower-bounds.
/// Requires V > 20.
BoxDimensionReport box_dimension_lower_bound(const ContinuedFraction& cf, double V);

struct PriorBoundComparison {
    double new_bound = 0.0;
    double old_bound = 0.0;
    double M_used = 0.0, C_used = 0.0, t2 = 0.0;
};
PriorBoundComparison prior_bound_comparison(const ContinuedFraction& cf, double V);

// Escape-rate exponent --------------------------------------------------------

enum class GammaMode { General, NoOnes };

struct GammaResult {
    double gamma = 0.0;
    double inverse_gamma = 0.0;  // the transport-bound ingredient
    double log_c1 = 0.0;         // log(3/(V-8)) < 0 for V > 11
    GammaMode mode = GammaMode::General;
    int window = 0;
};

/// Finite-prefix estimate of the trace-escape exponent gamma(V):
/// limsup surrogate of -k log c1 / (2 log q_k) (General), without the factor
/// 2 when the expansion contains no quotient 1 (NoOnes). Requires V > 20.
GammaResult gamma_exponent(const ContinuedFraction& cf, double V, GammaMode mode);

/// Minimal number of length-eps intervals covering a disjoint band union.
std::int64_t covering_count(const std::vector<Band>& bands, double eps);

}  // namespace sturmian
