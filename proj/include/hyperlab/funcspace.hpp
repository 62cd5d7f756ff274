#pragma once

#include <map>

#include "hyperlab/group_lattice.hpp"

namespace hyperlab {

// Exponent of an L^p space.  Only 1 <= p < infinity is supported.
struct NormParam {
    double p;
    explicit NormParam(double p_);
};

// Finitely supported real function on a group model, the computable stand-in
// for a compactly supported L^p element.  Entries with value exactly zero
// are never stored, so support(), is_zero() and equality are canonical.
class LatticeFunction {
public:
    explicit LatticeFunction(GroupModel model) : model_(std::move(model)) {}

    const GroupModel& model() const { return model_; }
    double at(const GroupPoint& x) const;
    void set(const GroupPoint& x, double v);

    const std::map<GroupPoint, double>& entries() const { return values_; }
    std::size_t support_size() const { return values_.size(); }
    bool is_zero() const { return values_.empty(); }
    CompactRegion support() const;

    // Pointwise restriction f * indicator(E).
    LatticeFunction restricted(const CompactRegion& E) const;
    LatticeFunction scaled(double c) const;
    // Push-forward under translation: g with g(x + s*a) = f(x).
    LatticeFunction translated(const GroupPoint& a, std::int64_t s) const;

    friend LatticeFunction operator+(const LatticeFunction& f, const LatticeFunction& g);
    friend LatticeFunction operator-(const LatticeFunction& f, const LatticeFunction& g);

    bool operator==(const LatticeFunction&) const = default;

private:
    GroupModel model_;
    std::map<GroupPoint, double> values_;
};

// Indicator of the region, value 1 on every cell.
LatticeFunction indicator(const GroupModel& model, const CompactRegion& region);

// (sum |f(x)|^p * cell_volume)^(1/p), compensated summation.
double lp_norm(const LatticeFunction& f, NormParam p);
// The p-th power of the norm, the quantity most reports work with.
double lp_norm_pow(const LatticeFunction& f, NormParam p);
double lp_distance(const LatticeFunction& f, const LatticeFunction& g, NormParam p);
double sup_norm(const LatticeFunction& f);

}  // namespace hyperlab
