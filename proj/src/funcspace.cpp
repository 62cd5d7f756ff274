#include "hyperlab/funcspace.hpp"

#include <cmath>

#include "hyperlab/numeric.hpp"

namespace hyperlab {

NormParam::NormParam(double p_) : p(p_) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("norm exponent must satisfy 1 <= p < infinity");
}

double LatticeFunction::at(const GroupPoint& x) const {
    const auto it = values_.find(x);
    return it == values_.end() ? 0.0 : it->second;
}

void LatticeFunction::set(const GroupPoint& x, double v) {
    model_.validate(x);
    if (!std::isfinite(v)) throw std::invalid_argument("function values must be finite");
    if (v == 0.0)
        values_.erase(x);
    else
        values_[x] = v;
}

CompactRegion LatticeFunction::support() const {
    std::vector<GroupPoint> cells;
    cells.reserve(values_.size());
    for (const auto& [x, v] : values_) cells.push_back(x);
    return CompactRegion(std::move(cells));
}

LatticeFunction LatticeFunction::restricted(const CompactRegion& E) const {
    LatticeFunction out(model_);
    for (const auto& [x, v] : values_)
        if (E.contains(x)) out.values_[x] = v;
    return out;
}

LatticeFunction LatticeFunction::scaled(double c) const {
    if (!std::isfinite(c)) throw std::invalid_argument("scale factor must be finite");
    LatticeFunction out(model_);
    if (c == 0.0) return out;
    for (const auto& [x, v] : values_) {
        const double cv = c * v;
        if (cv != 0.0) out.values_[x] = cv;
    }
    return out;
}

LatticeFunction LatticeFunction::translated(const GroupPoint& a, std::int64_t s) const {
    LatticeFunction out(model_);
    for (const auto& [x, v] : values_) out.values_[translate(model_, x, a, -s)] = v;
    return out;
}

static void require_same_model(const LatticeFunction& f, const LatticeFunction& g) {
    if (!(f.model() == g.model()))
        throw std::invalid_argument("functions live on different group models");
}

LatticeFunction operator+(const LatticeFunction& f, const LatticeFunction& g) {
    require_same_model(f, g);
    LatticeFunction out = f;
    for (const auto& [x, v] : g.entries()) out.set(x, out.at(x) + v);
    return out;
}

LatticeFunction operator-(const LatticeFunction& f, const LatticeFunction& g) {
    require_same_model(f, g);
    LatticeFunction out = f;
    for (const auto& [x, v] : g.entries()) out.set(x, out.at(x) - v);
    return out;
}

LatticeFunction indicator(const GroupModel& model, const CompactRegion& region) {
    LatticeFunction out(model);
    for (const auto& x : region.cells()) out.set(x, 1.0);
    return out;
}

double lp_norm_pow(const LatticeFunction& f, NormParam p) {
    KahanAccumulator acc;
    for (const auto& [x, v] : f.entries()) acc.add(std::pow(std::abs(v), p.p));
    return acc.value() * f.model().cell_volume();
}

double lp_norm(const LatticeFunction& f, NormParam p) {
    return std::pow(lp_norm_pow(f, p), 1.0 / p.p);
}

double lp_distance(const LatticeFunction& f, const LatticeFunction& g, NormParam p) {
    return lp_norm(f - g, p);
}

double sup_norm(const LatticeFunction& f) {
    double best = 0.0;
    for (const auto& [x, v] : f.entries()) best = std::max(best, std::abs(v));
    return best;
}

}  // namespace hyperlab
