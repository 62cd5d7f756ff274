#pragma once

#include "hyperlab/funcspace.hpp"
#include "hyperlab/weights.hpp"

namespace hyperlab {

// One weighted translation: f |-> w * (f shifted by a), taken to the r-th
// power.  r lets a single base step carry several operators that move at
// different speeds.
struct OperatorSpec {
    GroupPoint a;
    WeightSpec w;
    std::int64_t r = 1;
};

void validate_operator(const GroupModel& model, const OperatorSpec& op);

// (T f)(x) = w(x) * f(x - a).
LatticeFunction apply_translation(const GroupPoint& a, const WeightSpec& w,
                                  const LatticeFunction& f);

// n-th power in closed form: the prefactor is a single log-domain product
// per support point, not n sparse passes.
LatticeFunction apply_translation_power(const GroupPoint& a, const WeightSpec& w, std::int64_t n,
                                        const LatticeFunction& f);

// n-th power of the inverse map (S h)(x) = h(x + a) / w(x + a).  S is a
// two-sided inverse of T on finitely supported functions; the log products
// in apply_translation_power and here accumulate the same factor sequence
// in the same order, so T^n S^n h reproduces h to rounding error.
LatticeFunction apply_inverse_power(const GroupPoint& a, const WeightSpec& w, std::int64_t n,
                                    const LatticeFunction& h);

enum class ProductSide { Forward, Inverse };

// ||T^n (f restricted to E)||_p (Forward) or ||S^n (f restricted to E)||_p
// (Inverse) evaluated through the product formulas directly, without
// materializing the image.  Cross-checks the operator path.
double norm_via_products(const GroupPoint& a, const WeightSpec& w, std::int64_t n,
                         const LatticeFunction& f, const CompactRegion& E, NormParam p,
                         ProductSide side);

// ||T_{wT}^{nT} S_{wS}^{nS} g||_p^p via the change of variables that pulls
// both factor products back to the support of g.  Overflow gives +infinity
// rather than an exception; the value is a report quantity.
double compose_norm_pow(const GroupPoint& a, const WeightSpec& wT, std::int64_t nT,
                        const WeightSpec& wS, std::int64_t nS, const LatticeFunction& g,
                        NormParam p);

// ||T^n u - target||_p^p without materializing T^n u, so entries beyond
// double range degrade to +infinity instead of throwing.
double power_distance_pow(const GroupPoint& a, const WeightSpec& w, std::int64_t n,
                          const LatticeFunction& u, const LatticeFunction& target, NormParam p);

}  // namespace hyperlab
