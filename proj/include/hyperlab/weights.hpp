#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>

#include "hyperlab/group_lattice.hpp"

namespace hyperlab {

// Strictly positive, bounded weight on a group model.  Four families cover
// the experiments: constants (negative controls), two-sided step weights
// (exponential growth on one side, decay on the other), power-law weights
// with product growth like n^gamma, and explicit tables with a fallback.
class WeightSpec {
public:
    struct Constant {
        double c;
        bool operator==(const Constant&) const = default;
    };
    // v_neg where <x, direction> <= pivot, v_pos elsewhere.
    struct Step {
        double v_neg;
        double v_pos;
        std::vector<std::int64_t> direction;
        std::int64_t pivot;
        bool operator==(const Step&) const = default;
    };
    // ((|t| + 2) / (|t| + 1))^gamma with t = <x, direction>.
    struct PowerLaw {
        double gamma;
        std::vector<std::int64_t> direction;
        bool operator==(const PowerLaw&) const = default;
    };
    struct Table {
        std::map<GroupPoint, double> entries;
        double fallback;
        bool operator==(const Table&) const = default;
    };

    static WeightSpec constant(double c);
    static WeightSpec step(double v_neg, double v_pos, std::vector<std::int64_t> direction,
                           std::int64_t pivot);
    static WeightSpec power_law(double gamma, std::vector<std::int64_t> direction);
    static WeightSpec table(std::map<GroupPoint, double> entries, double fallback);

    double operator()(const GroupPoint& x) const;
    double log_at(const GroupPoint& x) const;

    // A finite upper bound for the weight over the whole group.
    double upper_bound() const;

    bool is_constant() const { return std::holds_alternative<Constant>(family_); }
    const Constant* as_constant() const { return std::get_if<Constant>(&family_); }
    std::string family_name() const;

    using Family = std::variant<Constant, Step, PowerLaw, Table>;
    const Family& family() const { return family_; }

    bool operator==(const WeightSpec&) const = default;

private:
    explicit WeightSpec(Family f) : family_(std::move(f)) {}
    Family family_;
};

// Products are carried in the log domain; value() may round to 0 or inf at
// the extremes of double range, the log stays exact arithmetic.
struct ProductValue {
    double log_value;
    double value() const;
    static ProductValue one() { return ProductValue{0.0}; }
};

// Product of w(x + s*a) for s = 1..n, the factor picked up by the n-th
// operator power at output point x + n*a pulled back to x.
ProductValue forward_product(const GroupModel& model, const WeightSpec& w, const GroupPoint& a,
                             const GroupPoint& x, std::int64_t n);

// Reciprocal of the product of w(x - s*a) for s = 0..n-1, the factor the
// n-th inverse-map power applies at x.
ProductValue backward_product_inv(const GroupModel& model, const WeightSpec& w,
                                  const GroupPoint& a, const GroupPoint& x, std::int64_t n);

// Product of w_num(x - s*a) / w_den(x - s*a) for s = 0..n-1, the cross term
// between two operators sharing the same step.
ProductValue ratio_product(const GroupModel& model, const WeightSpec& w_num,
                           const WeightSpec& w_den, const GroupPoint& a, const GroupPoint& x,
                           std::int64_t n);

struct ProductQuery {
    enum class Kind { Forward, BackwardInv, Ratio };
    Kind kind;
    WeightSpec numerator;
    std::optional<WeightSpec> denominator;  // Ratio only

    static ProductQuery forward(WeightSpec w);
    static ProductQuery backward_inv(WeightSpec w);
    static ProductQuery ratio(WeightSpec num, WeightSpec den);
};

// sup over the region cells of the selected product at order n.  Empty
// regions give log -infinity.  The reduction may run on several threads;
// see thread_budget().
ProductValue sup_product_on(const GroupModel& model, const CompactRegion& region,
                            const ProductQuery& query, const GroupPoint& a, std::int64_t n);

// Per-cell running log products, advanced one order at a time.  The witness
// searches sweep n upward over a fixed region; recomputing products from
// scratch at every n would cost O(n) per cell per step, the running table
// costs O(1).
class RunningProducts {
public:
    RunningProducts(GroupModel model, WeightSpec w, GroupPoint a,
                    std::vector<GroupPoint> cells);

    void advance();  // n -> n + 1
    std::int64_t order() const { return n_; }
    std::size_t cell_count() const { return cells_.size(); }
    const std::vector<GroupPoint>& cells() const { return cells_; }

    // log of the forward product at cells[i], order n.
    double log_forward(std::size_t i) const { return fwd_[i]; }
    // log of the plain backward product (w(x)w(x-a)...w(x-(n-1)a)).
    double log_backward_raw(std::size_t i) const { return bwd_[i]; }
    // log of its reciprocal, the inverse-map factor.
    double log_backward_inv(std::size_t i) const { return -bwd_[i]; }

private:
    GroupModel model_;
    WeightSpec w_;
    GroupPoint a_;
    std::vector<GroupPoint> cells_;
    std::int64_t n_ = 0;
    std::vector<double> fwd_;
    std::vector<double> bwd_;
};

}  // namespace hyperlab
