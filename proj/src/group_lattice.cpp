#include "hyperlab/group_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hyperlab {

GroupModel GroupModel::integer_lattice(int dim) {
    if (dim < 1) throw std::invalid_argument("integer_lattice: dim must be >= 1");
    return GroupModel(GroupKind::IntegerLattice, dim, 1.0, 0);
}

GroupModel GroupModel::discretized_line(double h) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("discretized_line: cell width must be positive and finite");
    return GroupModel(GroupKind::DiscretizedLine, 1, h, 0);
}

GroupModel GroupModel::finite_cyclic(std::int64_t q) {
    if (q < 1) throw std::invalid_argument("finite_cyclic: q must be >= 1");
    return GroupModel(GroupKind::FiniteCyclic, 1, 1.0, q);
}

std::int64_t GroupModel::modulus() const {
    if (kind_ != GroupKind::FiniteCyclic)
        throw std::logic_error("modulus: model is not finite cyclic");
    return modulus_;
}

double GroupModel::cell_width() const {
    if (kind_ != GroupKind::DiscretizedLine)
        throw std::logic_error("cell_width: model is not a discretized line");
    return cell_volume_;
}

void GroupModel::validate(const GroupPoint& x) const {
    if (static_cast<int>(x.dim()) != dim_)
        throw std::invalid_argument("point dimension " + std::to_string(x.dim()) +
                                    " does not match model dimension " + std::to_string(dim_));
    if (kind_ == GroupKind::FiniteCyclic) {
        const auto c = x.coords[0];
        if (c < 0 || c >= modulus_)
            throw std::invalid_argument("cyclic coordinate " + std::to_string(c) +
                                        " outside [0, " + std::to_string(modulus_) + ")");
    }
}

GroupPoint GroupModel::make_point(std::vector<std::int64_t> coords) const {
    if (static_cast<int>(coords.size()) != dim_)
        throw std::invalid_argument("make_point: wrong coordinate count");
    if (kind_ == GroupKind::FiniteCyclic) {
        auto& c = coords[0];
        c %= modulus_;
        if (c < 0) c += modulus_;
    }
    return GroupPoint{std::move(coords)};
}

bool GroupModel::is_periodic_element(const GroupPoint& a) const {
    validate(a);
    return kind_ == GroupKind::FiniteCyclic || a.is_zero();
}

GroupPoint translate(const GroupModel& model, const GroupPoint& x,
                     const GroupPoint& a, std::int64_t s) {
    model.validate(x);
    model.validate(a);
    GroupPoint out = x;
    for (std::size_t i = 0; i < out.coords.size(); ++i)
        out.coords[i] -= s * a.coords[i];
    if (model.kind() == GroupKind::FiniteCyclic) {
        const auto q = model.modulus();
        auto& c = out.coords[0];
        c %= q;
        if (c < 0) c += q;
    }
    return out;
}

CompactRegion::CompactRegion(std::vector<GroupPoint> cells) : cells_(std::move(cells)) {
    if (!cells_.empty()) {
        const auto d = cells_.front().dim();
        for (const auto& c : cells_)
            if (c.dim() != d)
                throw std::invalid_argument("region cells have mixed dimensions");
    }
    std::sort(cells_.begin(), cells_.end());
    cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
}

CompactRegion CompactRegion::box(const GroupPoint& lo, const GroupPoint& hi) {
    if (lo.dim() != hi.dim())
        throw std::invalid_argument("box: corner dimensions differ");
    if (lo.dim() == 0) throw std::invalid_argument("box: corners are empty");
    for (std::size_t i = 0; i < lo.dim(); ++i)
        if (lo.coords[i] > hi.coords[i])
            throw std::invalid_argument("box: lower corner exceeds upper corner");
    std::vector<GroupPoint> cells;
    GroupPoint cur = lo;
    for (;;) {
        cells.push_back(cur);
        std::size_t i = lo.dim();
        for (;;) {
            if (i == 0) return CompactRegion(std::move(cells));
            --i;
            if (cur.coords[i] < hi.coords[i]) {
                ++cur.coords[i];
                break;
            }
            cur.coords[i] = lo.coords[i];
        }
    }
}

CompactRegion CompactRegion::interval(std::int64_t lo, std::int64_t hi) {
    return box(GroupPoint::scalar(lo), GroupPoint::scalar(hi));
}

bool CompactRegion::contains(const GroupPoint& x) const {
    return std::binary_search(cells_.begin(), cells_.end(), x);
}

CompactRegion CompactRegion::translated(const GroupModel& model, const GroupPoint& a,
                                        std::int64_t s) const {
    std::vector<GroupPoint> out;
    out.reserve(cells_.size());
    for (const auto& c : cells_) out.push_back(translate(model, c, a, s));
    return CompactRegion(std::move(out));
}

bool CompactRegion::intersects(const CompactRegion& other) const {
    const auto& small = size() <= other.size() ? *this : other;
    const auto& large = size() <= other.size() ? other : *this;
    for (const auto& c : small.cells_)
        if (large.contains(c)) return true;
    return false;
}

CompactRegion CompactRegion::union_of(const CompactRegion& a, const CompactRegion& b) {
    std::vector<GroupPoint> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.cells_.begin(), a.cells_.end(), b.cells_.begin(), b.cells_.end(),
                   std::back_inserter(out));
    return CompactRegion(std::move(out));
}

CompactRegion CompactRegion::difference(const CompactRegion& a, const CompactRegion& b) {
    std::vector<GroupPoint> out;
    std::set_difference(a.cells_.begin(), a.cells_.end(), b.cells_.begin(), b.cells_.end(),
                        std::back_inserter(out));
    return CompactRegion(std::move(out));
}

CompactRegion CompactRegion::intersection(const CompactRegion& a, const CompactRegion& b) {
    std::vector<GroupPoint> out;
    std::set_intersection(a.cells_.begin(), a.cells_.end(), b.cells_.begin(), b.cells_.end(),
                          std::back_inserter(out));
    return CompactRegion(std::move(out));
}

double haar_measure(const GroupModel& model, const CompactRegion& region) {
    for (const auto& c : region.cells()) model.validate(c);
    return static_cast<double>(region.size()) * model.cell_volume();
}

HorizonResult aperiodicity_horizon(const GroupModel& model, const CompactRegion& K,
                                   const GroupPoint& a) {
    model.validate(a);
    for (const auto& c : K.cells()) model.validate(c);
    if (model.is_periodic_element(a)) return Periodic{};
    if (K.empty()) return Horizon{0};

    // K meets K + n*a only while n*|a_i| stays within the coordinate spread
    // of K for every i with a_i != 0, which bounds the scan.
    std::int64_t bound = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (a.coords[i] == 0) continue;
        std::int64_t lo = K.cells().front().coords[i], hi = lo;
        for (const auto& c : K.cells()) {
            lo = std::min(lo, c.coords[i]);
            hi = std::max(hi, c.coords[i]);
        }
        bound = std::min(bound, (hi - lo) / std::abs(a.coords[i]));
    }

    std::int64_t last_hit = 0;
    for (std::int64_t n = 1; n <= bound; ++n) {
        bool hit = false;
        for (const auto& x : K.cells()) {
            if (K.contains(translate(model, x, a, -n))) {
                hit = true;
                break;
            }
        }
        if (hit) last_hit = n;
    }
    return Horizon{last_hit};
}

std::int64_t require_horizon(const GroupModel& model, const CompactRegion& K,
                             const GroupPoint& a) {
    if (K.empty()) throw std::invalid_argument("aperiodicity horizon: region is empty");
    const auto res = aperiodicity_horizon(model, K, a);
    if (std::holds_alternative<Periodic>(res))
        throw std::invalid_argument(
            "translation element is periodic; an aperiodic element is required");
    return std::get<Horizon>(res).n;
}

}  // namespace hyperlab
