#pragma once

#include <optional>
#include <string>

#include "hyperlab/translation_ops.hpp"

namespace hyperlab {

// Norms (p-th powers) of the pieces the transit vector decomposes into.
struct BlockNorms {
    std::vector<double> forward_pow;               // ||T_l^{A_l}(f chi_E)||_p^p
    std::vector<double> inverse_pow;               // ||S_l^{A_l}(f_l chi_E)||_p^p
    std::vector<std::vector<double>> cross_pow;    // [l][i], i != l
};

// Transit vector u = f chi_E + sum_l S_l^{A_l}(f_l chi_E), A_l = r_l * n,
// together with exact errors, the triangle-style bounds the proofs use, and
// a cross-check of every block norm along two independent computation
// paths.  The p-th-power bounds are only valid additively when the blocks
// have pairwise disjoint supports; the report says whether they do.
struct TransitReport {
    std::optional<LatticeFunction> u;
    std::int64_t n = 0;
    CompactRegion E;
    CompactRegion K;  // union of the supports of f and the targets
    double deficit_measure = 0.0;  // lambda(K \ E)

    BlockNorms blocks;           // product-formula path
    BlockNorms blocks_operator;  // materialized-operator path
    double max_rel_discrepancy = 0.0;

    double err_source_pow = 0.0;               // ||u - f||_p^p, exact
    std::vector<double> err_target_pow;        // ||T_l^{A_l} u - f_l||_p^p, exact
    double bound_source_pow = 0.0;             // sup|f|^p deficit + sum inverse blocks
    std::vector<double> bound_target_pow;      // per l
    bool source_blocks_disjoint = false;
    std::vector<char> target_blocks_disjoint;  // per l
    bool source_decomposition_holds = false;
    std::vector<char> target_decomposition_holds;
};

TransitReport build_transit_vector(const LatticeFunction& f,
                                   const std::vector<LatticeFunction>& targets,
                                   const std::vector<OperatorSpec>& ops, std::int64_t n,
                                   const CompactRegion& E, NormParam p);

// Unit-speed convenience overload.
TransitReport build_transit_vector(const LatticeFunction& f,
                                   const std::vector<LatticeFunction>& targets,
                                   const std::vector<WeightSpec>& weights, const GroupPoint& a,
                                   std::int64_t n, const CompactRegion& E, NormParam p);

// Deviation-set decomposition of a candidate f against the indicator of K
// at operator power m.  Each set collects the cells where one failure mode
// exceeds eta; when f and its images are eta^2-close to the indicator in
// L^p, Chebyshev gives each set measure below eta^p and the core keeps all
// but (2 + 3N) eta^p of K.
struct DeviationSets {
    double eta = 0.0;
    std::int64_t m = 0;

    CompactRegion far_from_one;                       // on K: |f - 1| >= eta
    CompactRegion mass_outside;                       // off K: |f| >= eta
    std::vector<CompactRegion> image_far_from_one;    // per l, on K: |T_l^m f - 1| >= eta
    std::vector<CompactRegion> forward_mass;          // per l, on K: phi_m |f| >= eta
    std::vector<CompactRegion> image_mass_outside;    // per l, off K: |T_l^m f| >= eta
    CompactRegion excluded;                           // union of the per-operator sets
    CompactRegion core;  // K minus far_from_one, shifted mass_outside, excluded

    bool premise_source_ok = false;            // ||f - chi_K||_p < eta^2
    std::vector<char> premise_image_ok;        // per l
    bool premise_ok = false;

    bool bounds_ok = false;  // only meaningful when premise_ok
    std::vector<std::string> violated;
    double removed_measure = 0.0;  // lambda(K minus core)
    double removed_bound = 0.0;    // (2 + 3N) eta^p

    // Sup products over the core, log scale, diagnostics for the searches.
    std::vector<double> log_sup_forward;
    std::vector<double> log_sup_backward_inv;
    std::vector<std::vector<double>> log_sup_ratio;  // [j][l], j != l diag 0
};

DeviationSets extract_deviation_sets(const LatticeFunction& f,
                                     const std::vector<WeightSpec>& weights, const GroupPoint& a,
                                     std::int64_t m, const CompactRegion& K, double eta,
                                     NormParam p);

// Largest eta = 2^-i, i = 1..i_max, whose decomposition passes premise and
// measure bounds; nullopt when none does.
std::optional<DeviationSets> scan_deviation_eta(const LatticeFunction& f,
                                                const std::vector<WeightSpec>& weights,
                                                const GroupPoint& a, std::int64_t m,
                                                const CompactRegion& K, NormParam p, int i_max);

// Greedy placement of J target tuples on one orbit: u = sum over tuples and
// operators of S_l^{r_l m_j} g_j^l, with each m_j the smallest time past
// m_{j-1} at which every residual term (T at one placed time against an
// inverse block at another) falls below eps / (2 J N).  Residuals are
// computed exactly; same-weight compositions telescope.
struct SynthesisReport {
    bool success = false;
    std::optional<LatticeFunction> u;
    std::vector<std::int64_t> times;
    double per_term_threshold = 0.0;
    std::vector<std::vector<double>> final_errors;  // [j][l] ||T_l^{r_l m_j} u - g_j^l||_p
    std::string diagnostics;
};

SynthesisReport synthesize_finite_horizon(const std::vector<OperatorSpec>& ops,
                                          const std::vector<std::vector<LatticeFunction>>& tuples,
                                          double eps, std::int64_t budget, NormParam p);

// d_n = max_l ||T_l^{r_l n} u - g_l||_p for n = 0..n_max.  Entries that
// leave double range surface as +infinity, never as silent clamps.
struct OrbitPoint {
    std::int64_t n = 0;
    double distance = 0.0;
    std::vector<double> per_op;
};

struct OrbitSeries {
    std::vector<OrbitPoint> points;
    std::vector<std::int64_t> visits(double eps) const;
};

OrbitSeries simulate_orbit(const std::vector<OperatorSpec>& ops, const LatticeFunction& u,
                           const std::vector<LatticeFunction>& targets, std::int64_t n_max,
                           NormParam p);

}  // namespace hyperlab
