#include "hyperlab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hyperlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPathTol = 1e-9;  // allowed relative gap between norm paths

void require_shared_step(const GroupModel& model, const std::vector<OperatorSpec>& ops) {
    if (ops.empty()) throw std::invalid_argument("at least one operator is required");
    for (const auto& op : ops) {
        validate_operator(model, op);
        if (!(op.a == ops.front().a))
            throw std::invalid_argument("operators must share the translation element");
    }
}

double rel_gap(double x, double y) {
    if (x == y) return 0.0;  // covers both zero and both infinite
    if (!std::isfinite(x) || !std::isfinite(y)) return kInf;
    const double scale = std::max(std::abs(x), std::abs(y));
    return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
}

LatticeFunction telescoped_image(const GroupPoint& a, const WeightSpec& w, std::int64_t A,
                                 std::int64_t B, const LatticeFunction& g) {
    if (A == B) return g;
    if (A > B) return apply_translation_power(a, w, A - B, g);
    return apply_inverse_power(a, w, B - A, g);
}

// ||T_{wl}^A S_{wi}^B g||_p, telescoping exactly when the weights agree.
double cross_norm(const GroupPoint& a, const WeightSpec& wl, std::int64_t A,
                  const WeightSpec& wi, std::int64_t B, const LatticeFunction& g, NormParam p) {
    try {
        if (wl == wi) return lp_norm(telescoped_image(a, wl, A, B, g), p);
    } catch (const std::overflow_error&) {
        return kInf;
    }
    const double pow_value = compose_norm_pow(a, wl, A, wi, B, g, p);
    return std::isfinite(pow_value) ? std::pow(pow_value, 1.0 / p.p) : kInf;
}

bool pairwise_disjoint(const std::vector<CompactRegion>& pieces) {
    for (std::size_t i = 0; i < pieces.size(); ++i)
        for (std::size_t j = i + 1; j < pieces.size(); ++j)
            if (pieces[i].intersects(pieces[j])) return false;
    return true;
}

}  // namespace

TransitReport build_transit_vector(const LatticeFunction& f,
                                   const std::vector<LatticeFunction>& targets,
                                   const std::vector<OperatorSpec>& ops, std::int64_t n,
                                   const CompactRegion& E, NormParam p) {
    const auto& model = f.model();
    require_shared_step(model, ops);
    if (targets.size() != ops.size())
        throw std::invalid_argument("one target per operator is required");
    for (const auto& g : targets)
        if (!(g.model() == model))
            throw std::invalid_argument("targets live on different group models");
    if (n < 0) throw std::invalid_argument("transit power n must be nonnegative");
    for (const auto& c : E.cells()) model.validate(c);

    const auto& a = ops.front().a;
    const int N = static_cast<int>(ops.size());

    TransitReport rep;
    rep.n = n;
    rep.E = E;
    rep.K = f.support();
    for (const auto& g : targets) rep.K = CompactRegion::union_of(rep.K, g.support());
    rep.deficit_measure = haar_measure(model, CompactRegion::difference(rep.K, E));

    const LatticeFunction fE = f.restricted(E);
    std::vector<LatticeFunction> gE;
    gE.reserve(N);
    for (const auto& g : targets) gE.push_back(g.restricted(E));

    std::vector<LatticeFunction> inverse_blocks;
    inverse_blocks.reserve(N);
    LatticeFunction u = fE;
    for (int l = 0; l < N; ++l) {
        inverse_blocks.push_back(apply_inverse_power(a, ops[l].w, ops[l].r * n, gE[l]));
        u = u + inverse_blocks.back();
    }
    rep.u = u;

    // Every block norm twice: once through the pulled-back product formula,
    // once through materialized operator images.
    rep.blocks.forward_pow.resize(N);
    rep.blocks.inverse_pow.resize(N);
    rep.blocks.cross_pow.assign(N, std::vector<double>(N, 0.0));
    rep.blocks_operator = rep.blocks;

    std::vector<LatticeFunction> forward_images;
    std::vector<std::vector<std::optional<LatticeFunction>>> cross_images(
        N, std::vector<std::optional<LatticeFunction>>(N));
    for (int l = 0; l < N; ++l) {
        const std::int64_t A = ops[l].r * n;
        rep.blocks.forward_pow[l] = compose_norm_pow(a, ops[l].w, A, ops[l].w, 0, fE, p);
        rep.blocks.inverse_pow[l] = compose_norm_pow(a, ops[l].w, 0, ops[l].w, A, gE[l], p);
        forward_images.push_back(apply_translation_power(a, ops[l].w, A, fE));
        rep.blocks_operator.forward_pow[l] = lp_norm_pow(forward_images[l], p);
        rep.blocks_operator.inverse_pow[l] = lp_norm_pow(inverse_blocks[l], p);
        for (int i = 0; i < N; ++i) {
            if (i == l) continue;
            const std::int64_t B = ops[i].r * n;
            rep.blocks.cross_pow[l][i] = compose_norm_pow(a, ops[l].w, A, ops[i].w, B, gE[i], p);
            cross_images[l][i] =
                ops[l].w == ops[i].w
                    ? telescoped_image(a, ops[l].w, A, B, gE[i])
                    : apply_translation_power(a, ops[l].w, A,
                                              apply_inverse_power(a, ops[i].w, B, gE[i]));
            rep.blocks_operator.cross_pow[l][i] = lp_norm_pow(*cross_images[l][i], p);
        }
    }

    for (int l = 0; l < N; ++l) {
        rep.max_rel_discrepancy = std::max(
            rep.max_rel_discrepancy,
            rel_gap(rep.blocks.forward_pow[l], rep.blocks_operator.forward_pow[l]));
        rep.max_rel_discrepancy = std::max(
            rep.max_rel_discrepancy,
            rel_gap(rep.blocks.inverse_pow[l], rep.blocks_operator.inverse_pow[l]));
        for (int i = 0; i < N; ++i)
            if (i != l)
                rep.max_rel_discrepancy = std::max(
                    rep.max_rel_discrepancy,
                    rel_gap(rep.blocks.cross_pow[l][i], rep.blocks_operator.cross_pow[l][i]));
    }
    if (rep.max_rel_discrepancy > kPathTol) {
        std::ostringstream msg;
        msg << "internal error: block norms disagree between the product and operator paths "
               "(relative gap "
            << rep.max_rel_discrepancy << ")";
        throw std::runtime_error(msg.str());
    }

    rep.err_source_pow = lp_norm_pow(u - f, p);
    const double sup_f = sup_norm(f);
    rep.bound_source_pow = std::pow(sup_f, p.p) * rep.deficit_measure;
    for (int l = 0; l < N; ++l) rep.bound_source_pow += rep.blocks.inverse_pow[l];

    {
        std::vector<CompactRegion> pieces;
        const auto leftover = (f - fE).support();
        if (!leftover.empty()) pieces.push_back(leftover);
        for (const auto& blk : inverse_blocks)
            if (!blk.is_zero()) pieces.push_back(blk.support());
        rep.source_blocks_disjoint = pairwise_disjoint(pieces);
    }
    rep.source_decomposition_holds =
        rep.err_source_pow <= rep.bound_source_pow * (1.0 + kPathTol) + 1e-300;

    rep.err_target_pow.resize(N);
    rep.bound_target_pow.resize(N);
    rep.target_blocks_disjoint.resize(N);
    rep.target_decomposition_holds.resize(N);
    for (int l = 0; l < N; ++l) {
        const std::int64_t A = ops[l].r * n;
        rep.err_target_pow[l] = power_distance_pow(a, ops[l].w, A, u, targets[l], p);
        double bound = std::pow(sup_norm(targets[l]), p.p) * rep.deficit_measure +
                       rep.blocks.forward_pow[l];
        std::vector<CompactRegion> pieces;
        const auto target_leftover = (targets[l] - gE[l]).support();
        if (!target_leftover.empty()) pieces.push_back(target_leftover);
        if (!forward_images[l].is_zero()) pieces.push_back(forward_images[l].support());
        for (int i = 0; i < N; ++i) {
            if (i == l) continue;
            bound += rep.blocks.cross_pow[l][i];
            if (cross_images[l][i].has_value() && !cross_images[l][i]->is_zero())
                pieces.push_back(cross_images[l][i]->support());
        }
        rep.bound_target_pow[l] = bound;
        rep.target_blocks_disjoint[l] = pairwise_disjoint(pieces) ? 1 : 0;
        rep.target_decomposition_holds[l] =
            rep.err_target_pow[l] <= bound * (1.0 + kPathTol) + 1e-300 ? 1 : 0;
    }

    return rep;
}

TransitReport build_transit_vector(const LatticeFunction& f,
                                   const std::vector<LatticeFunction>& targets,
                                   const std::vector<WeightSpec>& weights, const GroupPoint& a,
                                   std::int64_t n, const CompactRegion& E, NormParam p) {
    std::vector<OperatorSpec> ops;
    ops.reserve(weights.size());
    for (const auto& w : weights) ops.push_back(OperatorSpec{a, w, 1});
    return build_transit_vector(f, targets, ops, n, E, p);
}

DeviationSets extract_deviation_sets(const LatticeFunction& f,
                                     const std::vector<WeightSpec>& weights, const GroupPoint& a,
                                     std::int64_t m, const CompactRegion& K, double eta,
                                     NormParam p) {
    const auto& model = f.model();
    if (weights.empty()) throw std::invalid_argument("at least one weight is required");
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0, 1)");
    const std::int64_t horizon = require_horizon(model, K, a);
    if (m <= horizon)
        throw std::invalid_argument("power m must exceed the aperiodicity horizon " +
                                    std::to_string(horizon) + " of K");

    const int N = static_cast<int>(weights.size());
    const LatticeFunction chi_K = indicator(model, K);

    DeviationSets out;
    out.eta = eta;
    out.m = m;

    std::vector<LatticeFunction> images;
    images.reserve(N);
    for (const auto& w : weights) images.push_back(apply_translation_power(a, w, m, f));

    const auto collect = [](auto&& pred, const std::vector<GroupPoint>& candidates) {
        std::vector<GroupPoint> cells;
        for (const auto& x : candidates)
            if (pred(x)) cells.push_back(x);
        return CompactRegion(std::move(cells));
    };

    out.far_from_one =
        collect([&](const GroupPoint& x) { return std::abs(f.at(x) - 1.0) >= eta; }, K.cells());
    out.mass_outside = collect(
        [&](const GroupPoint& x) { return !K.contains(x) && std::abs(f.at(x)) >= eta; },
        f.support().cells());

    CompactRegion excluded;
    const double log_eta = std::log(eta);
    for (int l = 0; l < N; ++l) {
        out.image_far_from_one.push_back(collect(
            [&](const GroupPoint& x) { return std::abs(images[l].at(x) - 1.0) >= eta; },
            K.cells()));
        // phi_m(x) |f(x)| >= eta, checked in the log domain.
        out.forward_mass.push_back(collect(
            [&](const GroupPoint& x) {
                const double v = f.at(x);
                if (v == 0.0) return false;
                const double lp_ = forward_product(model, weights[l], a, x, m).log_value;
                return lp_ + std::log(std::abs(v)) >= log_eta;
            },
            K.cells()));
        out.image_mass_outside.push_back(collect(
            [&](const GroupPoint& x) { return !K.contains(x) && std::abs(images[l].at(x)) >= eta; },
            images[l].support().cells()));
        excluded = CompactRegion::union_of(excluded, out.image_far_from_one[l]);
        excluded = CompactRegion::union_of(excluded, out.forward_mass[l]);
        excluded = CompactRegion::union_of(excluded, out.image_mass_outside[l]);
    }
    out.excluded = excluded;

    CompactRegion removed = CompactRegion::union_of(out.far_from_one, excluded);
    removed = CompactRegion::union_of(removed, out.mass_outside.translated(model, a, -m));
    out.core = CompactRegion::difference(K, removed);

    out.premise_source_ok = lp_distance(f, chi_K, p) < eta * eta;
    out.premise_ok = out.premise_source_ok;
    for (int l = 0; l < N; ++l) {
        const bool ok = lp_distance(images[l], chi_K, p) < eta * eta;
        out.premise_image_ok.push_back(ok ? 1 : 0);
        out.premise_ok = out.premise_ok && ok;
    }

    out.removed_measure = haar_measure(model, CompactRegion::difference(K, out.core));
    out.removed_bound = (2.0 + 3.0 * N) * std::pow(eta, p.p);

    if (out.premise_ok) {
        const double cap = std::pow(eta, p.p);
        const auto check = [&](const CompactRegion& set, const std::string& name) {
            const double mu = haar_measure(model, set);
            if (!(mu < cap)) {
                std::ostringstream msg;
                msg << name << " has measure " << mu << ", not below eta^p = " << cap;
                out.violated.push_back(msg.str());
            }
        };
        check(out.far_from_one, "far_from_one");
        check(out.mass_outside, "mass_outside");
        for (int l = 0; l < N; ++l) {
            const auto tag = " (operator " + std::to_string(l + 1) + ")";
            check(out.image_far_from_one[l], "image_far_from_one" + tag);
            check(out.forward_mass[l], "forward_mass" + tag);
            check(out.image_mass_outside[l], "image_mass_outside" + tag);
        }
        if (!(out.removed_measure < out.removed_bound)) {
            std::ostringstream msg;
            msg << "removed measure " << out.removed_measure << " is not below (2 + 3N) eta^p = "
                << out.removed_bound;
            out.violated.push_back(msg.str());
        }
        out.bounds_ok = out.violated.empty();
    }

    for (int l = 0; l < N; ++l) {
        out.log_sup_forward.push_back(
            sup_product_on(model, out.core, ProductQuery::forward(weights[l]), a, m).log_value);
        out.log_sup_backward_inv.push_back(
            sup_product_on(model, out.core, ProductQuery::backward_inv(weights[l]), a, m)
                .log_value);
    }
    out.log_sup_ratio.assign(N, std::vector<double>(N, 0.0));
    for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l)
            if (j != l)
                out.log_sup_ratio[j][l] =
                    sup_product_on(model, out.core,
                                   ProductQuery::ratio(weights[j], weights[l]), a, m)
                        .log_value;

    return out;
}

std::optional<DeviationSets> scan_deviation_eta(const LatticeFunction& f,
                                                const std::vector<WeightSpec>& weights,
                                                const GroupPoint& a, std::int64_t m,
                                                const CompactRegion& K, NormParam p, int i_max) {
    if (i_max < 1) throw std::invalid_argument("eta scan needs i_max >= 1");
    for (int i = 1; i <= i_max; ++i) {
        auto sets = extract_deviation_sets(f, weights, a, m, K, std::pow(2.0, -i), p);
        if (sets.premise_ok && sets.bounds_ok) return sets;
    }
    return std::nullopt;
}

SynthesisReport synthesize_finite_horizon(const std::vector<OperatorSpec>& ops,
                                          const std::vector<std::vector<LatticeFunction>>& tuples,
                                          double eps, std::int64_t budget, NormParam p) {
    if (tuples.empty()) throw std::invalid_argument("synthesis needs at least one target tuple");
    if (!(eps > 0.0)) throw std::invalid_argument("synthesis radius eps must be positive");
    if (budget < 1) throw std::invalid_argument("synthesis budget must be >= 1");
    const auto& model = tuples.front().front().model();
    require_shared_step(model, ops);
    const int N = static_cast<int>(ops.size());
    const int J = static_cast<int>(tuples.size());
    for (const auto& tuple : tuples) {
        if (static_cast<int>(tuple.size()) != N)
            throw std::invalid_argument("every tuple needs one target per operator");
        for (const auto& g : tuple)
            if (!(g.model() == model))
                throw std::invalid_argument("targets live on different group models");
    }

    const auto& a = ops.front().a;
    SynthesisReport rep;
    rep.per_term_threshold = eps / (2.0 * J * N);

    // Residual of target (time_T, l) against block (time_S, i).
    const auto term = [&](std::int64_t time_T, int l, std::int64_t time_S, int i,
                          const LatticeFunction& g) {
        return cross_norm(a, ops[l].w, ops[l].r * time_T, ops[i].w, ops[i].r * time_S, g, p);
    };

    std::vector<std::int64_t> times;
    for (int j = 0; j < J; ++j) {
        const std::int64_t start = (j == 0 ? 1 : times.back() + 1);
        bool placed = false;
        double best_worst = kInf;
        std::int64_t best_m = start;
        std::string best_blame;

        for (std::int64_t m = start; m <= budget; ++m) {
            double worst = 0.0;
            std::string blame;
            const auto consider = [&](double v, std::int64_t tT, int l, std::int64_t tS, int i,
                                      int tuple_idx) {
                if (v > worst) {
                    worst = v;
                    std::ostringstream os;
                    os << "T_" << (l + 1) << "^{" << ops[l].r * tT << "} S_" << (i + 1) << "^{"
                       << ops[i].r * tS << "} applied to target " << (i + 1) << " of tuple "
                       << (tuple_idx + 1);
                    blame = os.str();
                }
            };

            // T at the new time vs every block: earlier tuples and the new
            // tuple's own off-operator blocks.
            for (int l = 0; l < N; ++l) {
                for (int jj = 0; jj < j; ++jj)
                    for (int i = 0; i < N; ++i)
                        consider(term(m, l, times[jj], i, tuples[jj][i]), m, l, times[jj], i, jj);
                for (int i = 0; i < N; ++i)
                    if (i != l) consider(term(m, l, m, i, tuples[j][i]), m, l, m, i, j);
            }
            // T at the placed times vs the new tuple's blocks.
            for (int jj = 0; jj < j; ++jj)
                for (int l = 0; l < N; ++l)
                    for (int i = 0; i < N; ++i)
                        consider(term(times[jj], l, m, i, tuples[j][i]), times[jj], l, m, i, j);

            if (worst < best_worst) {
                best_worst = worst;
                best_m = m;
                best_blame = blame;
            }
            if (worst < rep.per_term_threshold) {
                times.push_back(m);
                placed = true;
                break;
            }
        }

        if (!placed) {
            std::ostringstream msg;
            msg << "tuple " << (j + 1) << ": no time in [" << start << ", " << budget
                << "] brings every residual term below " << rep.per_term_threshold
                << "; best m = " << best_m << " with worst term " << best_blame << " = "
                << best_worst;
            rep.diagnostics = msg.str();
            rep.times = times;
            return rep;
        }
    }

    LatticeFunction u(model);
    for (int j = 0; j < J; ++j)
        for (int l = 0; l < N; ++l)
            u = u + apply_inverse_power(a, ops[l].w, ops[l].r * times[j], tuples[j][l]);

    rep.u = u;
    rep.times = times;
    rep.final_errors.assign(J, std::vector<double>(N, 0.0));
    bool all_ok = true;
    for (int j = 0; j < J; ++j) {
        for (int l = 0; l < N; ++l) {
            const double d =
                power_distance_pow(a, ops[l].w, ops[l].r * times[j], u, tuples[j][l], p);
            rep.final_errors[j][l] = std::isfinite(d) ? std::pow(d, 1.0 / p.p) : kInf;
            all_ok = all_ok && rep.final_errors[j][l] < eps;
        }
    }
    rep.success = all_ok;
    if (!all_ok) rep.diagnostics = "greedy placement finished but a final error is not below eps";
    return rep;
}

std::vector<std::int64_t> OrbitSeries::visits(double eps) const {
    std::vector<std::int64_t> out;
    for (const auto& pt : points)
        if (pt.distance < eps) out.push_back(pt.n);
    return out;
}

OrbitSeries simulate_orbit(const std::vector<OperatorSpec>& ops, const LatticeFunction& u,
                           const std::vector<LatticeFunction>& targets, std::int64_t n_max,
                           NormParam p) {
    const auto& model = u.model();
    require_shared_step(model, ops);
    if (targets.size() != ops.size())
        throw std::invalid_argument("orbit needs one target per operator");
    for (const auto& g : targets)
        if (!(g.model() == model))
            throw std::invalid_argument("targets live on different group models");
    if (n_max < 0) throw std::invalid_argument("orbit horizon must be nonnegative");

    const auto& a = ops.front().a;
    OrbitSeries series;
    for (std::int64_t n = 0; n <= n_max; ++n) {
        OrbitPoint pt;
        pt.n = n;
        for (std::size_t l = 0; l < ops.size(); ++l) {
            const double d = power_distance_pow(a, ops[l].w, ops[l].r * n, u, targets[l], p);
            pt.per_op.push_back(std::isfinite(d) ? std::pow(d, 1.0 / p.p) : kInf);
            pt.distance = std::max(pt.distance, pt.per_op.back());
        }
        series.points.push_back(pt);
    }
    return series;
}

}  // namespace hyperlab
