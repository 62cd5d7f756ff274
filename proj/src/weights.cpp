#include "hyperlab/weights.hpp"

#include <cmath>
#include <limits>

#include "hyperlab/parallel.hpp"

namespace hyperlab {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

std::int64_t dot(const GroupPoint& x, const std::vector<std::int64_t>& dir) {
    if (x.dim() != dir.size())
        throw std::invalid_argument("weight direction dimension does not match point");
    std::int64_t s = 0;
    for (std::size_t i = 0; i < dir.size(); ++i) s += x.coords[i] * dir[i];
    return s;
}

}  // namespace

WeightSpec WeightSpec::constant(double c) {
    require_positive(c, "constant weight");
    return WeightSpec(Constant{c});
}

WeightSpec WeightSpec::step(double v_neg, double v_pos, std::vector<std::int64_t> direction,
                            std::int64_t pivot) {
    require_positive(v_neg, "step weight v_neg");
    require_positive(v_pos, "step weight v_pos");
    if (direction.empty()) throw std::invalid_argument("step weight needs a direction");
    return WeightSpec(Step{v_neg, v_pos, std::move(direction), pivot});
}

WeightSpec WeightSpec::power_law(double gamma, std::vector<std::int64_t> direction) {
    if (!std::isfinite(gamma)) throw std::invalid_argument("power-law exponent must be finite");
    if (direction.empty()) throw std::invalid_argument("power-law weight needs a direction");
    return WeightSpec(PowerLaw{gamma, std::move(direction)});
}

WeightSpec WeightSpec::table(std::map<GroupPoint, double> entries, double fallback) {
    require_positive(fallback, "table weight fallback");
    for (const auto& [x, v] : entries) require_positive(v, "table weight entry");
    return WeightSpec(Table{std::move(entries), fallback});
}

double WeightSpec::operator()(const GroupPoint& x) const {
    return std::visit(
        [&x](const auto& fam) -> double {
            using F = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<F, Constant>) {
                return fam.c;
            } else if constexpr (std::is_same_v<F, Step>) {
                return dot(x, fam.direction) <= fam.pivot ? fam.v_neg : fam.v_pos;
            } else if constexpr (std::is_same_v<F, PowerLaw>) {
                const double t = static_cast<double>(std::abs(dot(x, fam.direction)));
                return std::pow((t + 2.0) / (t + 1.0), fam.gamma);
            } else {
                const auto it = fam.entries.find(x);
                return it == fam.entries.end() ? fam.fallback : it->second;
            }
        },
        family_);
}

double WeightSpec::log_at(const GroupPoint& x) const {
    return std::visit(
        [&x](const auto& fam) -> double {
            using F = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<F, Constant>) {
                return std::log(fam.c);
            } else if constexpr (std::is_same_v<F, Step>) {
                const auto t = dot(x, fam.direction);
                return std::log(t <= fam.pivot ? fam.v_neg : fam.v_pos);
            } else if constexpr (std::is_same_v<F, PowerLaw>) {
                const double t = static_cast<double>(std::abs(dot(x, fam.direction)));
                return fam.gamma * (std::log(t + 2.0) - std::log(t + 1.0));
            } else {
                const auto it = fam.entries.find(x);
                return std::log(it == fam.entries.end() ? fam.fallback : it->second);
            }
        },
        family_);
}

double WeightSpec::upper_bound() const {
    return std::visit(
        [](const auto& fam) -> double {
            using F = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<F, Constant>) {
                return fam.c;
            } else if constexpr (std::is_same_v<F, Step>) {
                return std::max(fam.v_neg, fam.v_pos);
            } else if constexpr (std::is_same_v<F, PowerLaw>) {
                // The base ratio lies in (1, 2], so the weight is capped by
                // 2^gamma for gamma >= 0 and approaches 1 from below otherwise.
                return std::max(1.0, std::pow(2.0, fam.gamma));
            } else {
                double best = fam.fallback;
                for (const auto& [x, v] : fam.entries) best = std::max(best, v);
                return best;
            }
        },
        family_);
}

std::string WeightSpec::family_name() const {
    return std::visit(
        [](const auto& fam) -> std::string {
            using F = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<F, Constant>) return "constant";
            if constexpr (std::is_same_v<F, Step>) return "step";
            if constexpr (std::is_same_v<F, PowerLaw>) return "power_law";
            return "table";
        },
        family_);
}

double ProductValue::value() const { return std::exp(log_value); }

static void require_order(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("product order must be nonnegative");
}

ProductValue forward_product(const GroupModel& model, const WeightSpec& w, const GroupPoint& a,
                             const GroupPoint& x, std::int64_t n) {
    require_order(n);
    double acc = 0.0;
    for (std::int64_t s = 1; s <= n; ++s) acc += w.log_at(translate(model, x, a, -s));
    return ProductValue{acc};
}

ProductValue backward_product_inv(const GroupModel& model, const WeightSpec& w,
                                  const GroupPoint& a, const GroupPoint& x, std::int64_t n) {
    require_order(n);
    double acc = 0.0;
    for (std::int64_t s = 0; s < n; ++s) acc += w.log_at(translate(model, x, a, s));
    return ProductValue{-acc};
}

ProductValue ratio_product(const GroupModel& model, const WeightSpec& w_num,
                           const WeightSpec& w_den, const GroupPoint& a, const GroupPoint& x,
                           std::int64_t n) {
    require_order(n);
    double acc = 0.0;
    for (std::int64_t s = 0; s < n; ++s) {
        const auto pt = translate(model, x, a, s);
        acc += w_num.log_at(pt) - w_den.log_at(pt);
    }
    return ProductValue{acc};
}

ProductQuery ProductQuery::forward(WeightSpec w) {
    return ProductQuery{Kind::Forward, std::move(w), std::nullopt};
}
ProductQuery ProductQuery::backward_inv(WeightSpec w) {
    return ProductQuery{Kind::BackwardInv, std::move(w), std::nullopt};
}
ProductQuery ProductQuery::ratio(WeightSpec num, WeightSpec den) {
    return ProductQuery{Kind::Ratio, std::move(num), std::move(den)};
}

ProductValue sup_product_on(const GroupModel& model, const CompactRegion& region,
                            const ProductQuery& query, const GroupPoint& a, std::int64_t n) {
    require_order(n);
    if (query.kind == ProductQuery::Kind::Ratio && !query.denominator.has_value())
        throw std::invalid_argument("ratio query needs a denominator weight");
    const auto& cells = region.cells();
    const double best = parallel_max(cells.size(), [&](std::size_t i) {
        switch (query.kind) {
            case ProductQuery::Kind::Forward:
                return forward_product(model, query.numerator, a, cells[i], n).log_value;
            case ProductQuery::Kind::BackwardInv:
                return backward_product_inv(model, query.numerator, a, cells[i], n).log_value;
            default:
                return ratio_product(model, query.numerator, *query.denominator, a, cells[i], n)
                    .log_value;
        }
    });
    if (cells.empty()) return ProductValue{-std::numeric_limits<double>::infinity()};
    return ProductValue{best};
}

RunningProducts::RunningProducts(GroupModel model, WeightSpec w, GroupPoint a,
                                 std::vector<GroupPoint> cells)
    : model_(std::move(model)),
      w_(std::move(w)),
      a_(std::move(a)),
      cells_(std::move(cells)),
      fwd_(cells_.size(), 0.0),
      bwd_(cells_.size(), 0.0) {
    model_.validate(a_);
    for (const auto& c : cells_) model_.validate(c);
}

void RunningProducts::advance() {
    // Order n -> n+1 appends factor w(x + (n+1)a) forward and w(x - n*a)
    // backward.
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        fwd_[i] += w_.log_at(translate(model_, cells_[i], a_, -(n_ + 1)));
        bwd_[i] += w_.log_at(translate(model_, cells_[i], a_, n_));
    }
    ++n_;
}

}  // namespace hyperlab
