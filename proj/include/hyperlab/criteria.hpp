#pragma once

#include <optional>
#include <string>
#include <utility>

#include "hyperlab/translation_ops.hpp"

namespace hyperlab {

// Budgeted schedule for the witness searches: at stage k the products must
// fall below eps[k-1] on an admissible set E whose complement in K measures
// at most deficit[k-1].  eps must decrease strictly, deficits must not
// increase, so stages only get harder and the searches can stop at the
// first stage that fails.
struct WitnessSchedule {
    std::vector<double> eps;
    std::vector<double> deficit;
    std::int64_t n_max = 400;
    int k_max = 10;

    void validate() const;

    // eps_k = 2^-k, deficit_k = measure_K * k^-p.
    static WitnessSchedule defaults(double measure_K, double p, int k_max = 10,
                                    std::int64_t n_max = 400);
    // eps_k = 2^-k with no measure allowance: E must be all of K.
    static WitnessSchedule zero_deficit(int k_max = 10, std::int64_t n_max = 400);
};

struct WitnessEntry {
    int k = 0;
    std::int64_t n = 0;
    CompactRegion E;
};

// Refutation certificate for constant weights: one of the two product
// families equals c^(+-n) and never drops below 1.
struct MonotoneCertificate {
    double c = 1.0;
    std::string reason;
};

// Refutation certificate for the two-sided joint condition: the two ratio
// products in opposite directions multiply to 1 at every point, so at each
// x one of them is >= 1 and no admissible set short of a full measure
// allowance can exist once eps drops below 1.
struct ReciprocalCertificate {
    int pair_j = 0;  // 1-based operator indices of the exhibited pair
    int pair_l = 0;
    int k = 0;  // first stage demanding eps < 1 with deficit < measure(K)
    double eps_k = 0.0;
    double deficit_k = 0.0;
    double measure_K = 0.0;
    std::int64_t n_checked = 0;
    double max_abs_log_residual = 0.0;  // sup |log R_jl + log R_lj| over K, n <= n_checked
    std::string reason;
};

// Per-stage numbers backing a verdict.  Sup products are reported in the
// log domain over the stage's admissible set (and over all of K at the best
// attempt when a stage fails).
struct StageDiagnostic {
    int k = 0;
    double eps_k = 0.0;
    double deficit_allowed = 0.0;
    std::int64_t n = 0;
    double deficit = 0.0;
    bool admissible = false;
    double log_sup_forward = 0.0;
    double log_sup_backward_inv = 0.0;
    std::optional<double> log_sup_ratio;  // joint searches only
};

enum class VerdictKind { Satisfied, Refuted, BudgetExhausted };

struct Verdict {
    VerdictKind kind = VerdictKind::BudgetExhausted;
    std::vector<WitnessEntry> witness;
    std::optional<MonotoneCertificate> monotone;
    std::optional<ReciprocalCertificate> reciprocal;
    std::vector<StageDiagnostic> diagnostics;
    std::string note;
};

// Witness search for a single weighted translation: find n_1 < n_2 < ...
// with both product families below eps_k on an admissible subset of K.
Verdict check_hypercyclicity(const GroupModel& model, const WeightSpec& w, const GroupPoint& a,
                             const CompactRegion& K, const WitnessSchedule& sched, NormParam p);

// Joint condition for several operators with a shared step.  TwoSided
// additionally demands every ordered ratio product R^(j,l) small on E,
// which self-destructs: R^(j,l) * R^(l,j) = 1 pointwise.  OneDirectional
// checks only the listed ordered pairs and is an intentional relaxation;
// every verdict it produces carries a note saying so.
enum class JointMode { TwoSided, OneDirectional };

Verdict check_joint_condition(const GroupModel& model, const std::vector<WeightSpec>& weights,
                              const GroupPoint& a, const CompactRegion& K,
                              const WitnessSchedule& sched, NormParam p, JointMode mode,
                              const std::vector<std::pair<int, int>>& ordering = {});

// Three-term criterion check over a fixed time sequence: forward images of
// dense-set functions shrink, inverse images of target-set functions
// shrink, and mixed compositions converge to the Kronecker-delta pattern.
struct CriterionInput {
    std::vector<OperatorSpec> ops;
    std::vector<std::int64_t> n_seq;
    std::vector<LatticeFunction> dense_tests;                 // hit by T_l powers
    std::vector<std::vector<LatticeFunction>> target_tests;   // per l, hit by S_l powers
    NormParam p{2.0};
    double tol = 1e-6;
};

struct CriterionRow {
    std::int64_t n = 0;
    double forward = 0.0;  // max_l max_f ||T_l^{r_l n} f||_p
    double inverse = 0.0;  // max_l max_g ||S_l^{r_l n} g||_p
    double cross = 0.0;    // max over i,l,g of ||T_l^{r_l n} S_i^{r_i n} g - delta_il g||_p
    int cross_arg_l = 0;   // 1-based attribution of the cross maximum
    int cross_arg_i = 0;
    int cross_arg_test = 0;
};

struct CriterionReport {
    std::vector<CriterionRow> rows;
    bool satisfied = false;
    double tol = 0.0;
    std::string failure;  // empty when satisfied
};

CriterionReport verify_disjoint_criterion(const CriterionInput& in);

// For n = 1..n_max, builds u = f0 + sum_l S_l^{r_l n} f_l and measures how
// well the orbit of u visits f0 and the targets; stops at the first n with
// every error below eps.
struct ProbeResult {
    bool success = false;
    std::int64_t n = 0;  // witness time, or the best time tried
    std::optional<LatticeFunction> u;
    double err_source = 0.0;
    std::vector<double> err_targets;
    std::vector<double> inverse_block;              // ||S_l^{r_l n} f_l||_p
    std::vector<double> forward_block;              // ||T_l^{r_l n} f0||_p
    std::vector<std::vector<double>> cross_block;   // [l][i], i != l
    std::string blame;  // dominating failed term when not successful
};

ProbeResult probe_transitivity(const std::vector<OperatorSpec>& ops, const LatticeFunction& f0,
                               const std::vector<LatticeFunction>& targets, double eps,
                               std::int64_t n_max, NormParam p);

}  // namespace hyperlab
