#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hyperlab {

// A point of a lattice model, stored as integer cell coordinates.  For the
// discretized line the single coordinate indexes cells of width h; for the
// finite cyclic group coordinates are kept reduced to [0, q).
struct GroupPoint {
    std::vector<std::int64_t> coords;

    GroupPoint() = default;
    explicit GroupPoint(std::vector<std::int64_t> c) : coords(std::move(c)) {}
    static GroupPoint scalar(std::int64_t v) { return GroupPoint{{v}}; }

    std::size_t dim() const { return coords.size(); }
    bool is_zero() const {
        for (auto c : coords)
            if (c != 0) return false;
        return true;
    }

    auto operator<=>(const GroupPoint&) const = default;
};

enum class GroupKind { IntegerLattice, DiscretizedLine, FiniteCyclic };

// Locally compact abelian group approximated at desk scale.  Three models:
//   integer_lattice(d)   Z^d with counting measure,
//   discretized_line(h)  cells of width h on the real line; translation
//                        elements move by whole cells, measure weights each
//                        cell by h,
//   finite_cyclic(q)     Z/qZ, the compact negative control in which every
//                        element is periodic.
class GroupModel {
public:
    static GroupModel integer_lattice(int dim);
    static GroupModel discretized_line(double h);
    static GroupModel finite_cyclic(std::int64_t q);

    GroupKind kind() const { return kind_; }
    int dim() const { return dim_; }
    double cell_volume() const { return cell_volume_; }

    // FiniteCyclic only.
    std::int64_t modulus() const;
    // DiscretizedLine only.
    double cell_width() const;

    GroupPoint identity() const { return GroupPoint{std::vector<std::int64_t>(dim_, 0)}; }

    // Throws std::invalid_argument when the point does not belong to the
    // model (wrong dimension, or cyclic coordinate outside [0, q)).
    void validate(const GroupPoint& x) const;

    // Builds a valid point from raw coordinates, reducing mod q for the
    // cyclic model.  Throws on dimension mismatch.
    GroupPoint make_point(std::vector<std::int64_t> coords) const;

    // True when translation by a eventually returns to the start: a == 0, or
    // the model is finite cyclic (every element has finite order there).
    bool is_periodic_element(const GroupPoint& a) const;

    bool operator==(const GroupModel&) const = default;

private:
    GroupModel(GroupKind k, int d, double vol, std::int64_t q)
        : kind_(k), dim_(d), cell_volume_(vol), modulus_(q) {}

    GroupKind kind_;
    int dim_;
    double cell_volume_;
    std::int64_t modulus_;
};

// x - s*a in the group (reduced mod q for the cyclic model).  The sign
// convention matches the operator modules: applying a weighted translation
// with step a pulls function values from x - a, so s counts how many steps
// of the operator have been taken.
GroupPoint translate(const GroupModel& model, const GroupPoint& x,
                     const GroupPoint& a, std::int64_t s);

// Finite union of cells, kept sorted and duplicate free so that regions
// compare and subtract like sets.
class CompactRegion {
public:
    CompactRegion() = default;
    explicit CompactRegion(std::vector<GroupPoint> cells);

    // Axis-aligned box lo..hi inclusive in every coordinate.  Throws when
    // dimensions mismatch or lo exceeds hi in some coordinate.
    static CompactRegion box(const GroupPoint& lo, const GroupPoint& hi);
    // One-dimensional convenience for [lo, hi].
    static CompactRegion interval(std::int64_t lo, std::int64_t hi);

    bool empty() const { return cells_.empty(); }
    std::size_t size() const { return cells_.size(); }
    const std::vector<GroupPoint>& cells() const { return cells_; }
    bool contains(const GroupPoint& x) const;

    CompactRegion translated(const GroupModel& model, const GroupPoint& a,
                             std::int64_t s) const;
    bool intersects(const CompactRegion& other) const;

    static CompactRegion union_of(const CompactRegion& a, const CompactRegion& b);
    static CompactRegion difference(const CompactRegion& a, const CompactRegion& b);
    static CompactRegion intersection(const CompactRegion& a, const CompactRegion& b);

    bool operator==(const CompactRegion&) const = default;

private:
    std::vector<GroupPoint> cells_;
};

// Haar measure of the region: cell count times cell volume.  Exact for
// translated copies of the same region because translation permutes cells.
double haar_measure(const GroupModel& model, const CompactRegion& region);

// Least N >= 0 such that K and K shifted by n*a are disjoint for every
// n > N.  Only defined for aperiodic elements; Periodic is returned for
// a == 0 and for every element of a finite cyclic model.
struct Horizon {
    std::int64_t n;
    bool operator==(const Horizon&) const = default;
};
struct Periodic {
    bool operator==(const Periodic&) const = default;
};
using HorizonResult = std::variant<Horizon, Periodic>;

HorizonResult aperiodicity_horizon(const GroupModel& model, const CompactRegion& K,
                                   const GroupPoint& a);

// Convenience: horizon value for aperiodic a, throws std::invalid_argument
// when a is periodic or K is empty.
std::int64_t require_horizon(const GroupModel& model, const CompactRegion& K,
                             const GroupPoint& a);

}  // namespace hyperlab
