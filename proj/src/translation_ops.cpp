#include "hyperlab/translation_ops.hpp"

#include <cmath>
#include <limits>

#include "hyperlab/numeric.hpp"

namespace hyperlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// v * e^L evaluated so that the result only leaves double range when the
// true value does: the common case multiplies directly, the extreme case
// folds |v| into the exponent.
double scale_by_exp(double L, double v) {
    if (v == 0.0) return 0.0;
    const double e = std::exp(L);
    if (e > 0.0 && std::isfinite(e)) return e * v;
    const double m = std::exp(L + std::log(std::abs(v)));
    return v < 0.0 ? -m : m;
}

void require_order(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("operator power must be nonnegative");
}

}  // namespace

void validate_operator(const GroupModel& model, const OperatorSpec& op) {
    model.validate(op.a);
    if (op.r < 1) throw std::invalid_argument("operator speed r must be >= 1");
}

LatticeFunction apply_translation(const GroupPoint& a, const WeightSpec& w,
                                  const LatticeFunction& f) {
    return apply_translation_power(a, w, 1, f);
}

LatticeFunction apply_translation_power(const GroupPoint& a, const WeightSpec& w, std::int64_t n,
                                        const LatticeFunction& f) {
    require_order(n);
    const auto& model = f.model();
    model.validate(a);
    LatticeFunction out(model);
    for (const auto& [y, v] : f.entries()) {
        // Factors w(y + s*a), s = n..1.  Descending s walks the same point
        // sequence in the same order as apply_inverse_power does at the
        // matching input, which is what makes T^n S^n h - h pure rounding.
        double L = 0.0;
        for (std::int64_t s = n; s >= 1; --s) L += w.log_at(translate(model, y, a, -s));
        const double val = scale_by_exp(L, v);
        if (!std::isfinite(val))
            throw std::overflow_error("translation power image left double range");
        out.set(translate(model, y, a, -n), val);
    }
    return out;
}

LatticeFunction apply_inverse_power(const GroupPoint& a, const WeightSpec& w, std::int64_t n,
                                    const LatticeFunction& h) {
    require_order(n);
    const auto& model = h.model();
    model.validate(a);
    LatticeFunction out(model);
    for (const auto& [y, v] : h.entries()) {
        // Factors w(y - t*a), t = 0..n-1, ascending.
        double L = 0.0;
        for (std::int64_t t = 0; t < n; ++t) L += w.log_at(translate(model, y, a, t));
        const double val = scale_by_exp(-L, v);
        if (!std::isfinite(val))
            throw std::overflow_error("inverse-map power image left double range");
        out.set(translate(model, y, a, n), val);
    }
    return out;
}

double norm_via_products(const GroupPoint& a, const WeightSpec& w, std::int64_t n,
                         const LatticeFunction& f, const CompactRegion& E, NormParam p,
                         ProductSide side) {
    require_order(n);
    const auto& model = f.model();
    model.validate(a);
    KahanAccumulator acc;
    for (const auto& [z, v] : f.entries()) {
        if (!E.contains(z)) continue;
        const double L = side == ProductSide::Forward
                             ? forward_product(model, w, a, z, n).log_value
                             : backward_product_inv(model, w, a, z, n).log_value;
        const double term = std::exp(p.p * (L + std::log(std::abs(v))));
        if (!std::isfinite(term)) return kInf;
        acc.add(term);
    }
    return std::pow(acc.value() * model.cell_volume(), 1.0 / p.p);
}

double compose_norm_pow(const GroupPoint& a, const WeightSpec& wT, std::int64_t nT,
                        const WeightSpec& wS, std::int64_t nS, const LatticeFunction& g,
                        NormParam p) {
    require_order(nT);
    require_order(nS);
    const auto& model = g.model();
    model.validate(a);
    KahanAccumulator acc;
    for (const auto& [z, v] : g.entries()) {
        // Image point of z is z + (nT - nS)*a; both factor products pull
        // back to z.
        double L = 0.0;
        for (std::int64_t s = 0; s < nT; ++s)
            L += wT.log_at(translate(model, z, a, s + nS - nT));
        for (std::int64_t t = 0; t < nS; ++t) L -= wS.log_at(translate(model, z, a, t));
        const double term = std::exp(p.p * (L + std::log(std::abs(v))));
        if (!std::isfinite(term)) return kInf;
        acc.add(term);
    }
    return acc.value() * model.cell_volume();
}

double power_distance_pow(const GroupPoint& a, const WeightSpec& w, std::int64_t n,
                          const LatticeFunction& u, const LatticeFunction& target, NormParam p) {
    require_order(n);
    if (!(u.model() == target.model()))
        throw std::invalid_argument("functions live on different group models");
    const auto& model = u.model();
    model.validate(a);

    LatticeFunction residual = target.scaled(-1.0);
    bool overflow = false;
    for (const auto& [z, v] : u.entries()) {
        double L = 0.0;
        for (std::int64_t s = n; s >= 1; --s) L += w.log_at(translate(model, z, a, -s));
        const double val = scale_by_exp(L, v);
        if (!std::isfinite(val)) {
            overflow = true;
            break;
        }
        const auto x = translate(model, z, a, -n);
        residual.set(x, residual.at(x) + val);
    }
    if (overflow) return kInf;
    return lp_norm_pow(residual, p);
}

}  // namespace hyperlab
