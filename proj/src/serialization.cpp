#include "hyperlab/serialization.hpp"

#include <cmath>

namespace hyperlab {

json json_num(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

json to_json(const GroupModel& model) {
    switch (model.kind()) {
        case GroupKind::IntegerLattice:
            return json{{"kind", "integer_lattice"}, {"dim", model.dim()}};
        case GroupKind::DiscretizedLine:
            return json{{"kind", "discretized_line"}, {"h", model.cell_width()}};
        default:
            return json{{"kind", "finite_cyclic"}, {"q", model.modulus()}};
    }
}

GroupModel model_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("model: expected an object with a \"kind\" field");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "integer_lattice") return GroupModel::integer_lattice(j.at("dim").get<int>());
    if (kind == "discretized_line")
        return GroupModel::discretized_line(j.at("h").get<double>());
    if (kind == "finite_cyclic")
        return GroupModel::finite_cyclic(j.at("q").get<std::int64_t>());
    throw std::invalid_argument("model: unknown kind \"" + kind + "\"");
}

json to_json(const GroupPoint& x) { return json(x.coords); }

GroupPoint point_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("point: expected a nonempty array of integers");
    std::vector<std::int64_t> coords;
    for (const auto& c : j) {
        if (!c.is_number_integer())
            throw std::invalid_argument("point: coordinates must be integers");
        coords.push_back(c.get<std::int64_t>());
    }
    return GroupPoint{std::move(coords)};
}

json to_json(const CompactRegion& region) {
    json cells = json::array();
    for (const auto& c : region.cells()) cells.push_back(to_json(c));
    return json{{"cells", cells}};
}

CompactRegion region_from_json(const json& j, const GroupModel& model) {
    if (!j.is_object()) throw std::invalid_argument("region: expected an object");
    if (j.contains("cells")) {
        std::vector<GroupPoint> cells;
        for (const auto& c : j.at("cells")) cells.push_back(model.make_point(point_from_json(c).coords));
        return CompactRegion(std::move(cells));
    }
    if (j.contains("box_min") && j.contains("box_max")) {
        const auto lo = point_from_json(j.at("box_min"));
        const auto hi = point_from_json(j.at("box_max"));
        auto box = CompactRegion::box(lo, hi);
        if (model.kind() != GroupKind::FiniteCyclic) return box;
        std::vector<GroupPoint> cells;
        for (const auto& c : box.cells()) cells.push_back(model.make_point(c.coords));
        return CompactRegion(std::move(cells));
    }
    throw std::invalid_argument("region: expected \"cells\" or \"box_min\"/\"box_max\"");
}

json to_json(const WeightSpec& w) {
    return std::visit(
        [](const auto& fam) -> json {
            using F = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<F, WeightSpec::Constant>) {
                return json{{"family", "constant"}, {"c", fam.c}};
            } else if constexpr (std::is_same_v<F, WeightSpec::Step>) {
                return json{{"family", "step"},
                            {"v_neg", fam.v_neg},
                            {"v_pos", fam.v_pos},
                            {"direction", fam.direction},
                            {"pivot", fam.pivot}};
            } else if constexpr (std::is_same_v<F, WeightSpec::PowerLaw>) {
                return json{{"family", "power_law"},
                            {"gamma", fam.gamma},
                            {"direction", fam.direction}};
            } else {
                json entries = json::array();
                for (const auto& [x, v] : fam.entries)
                    entries.push_back(json::array({to_json(x), v}));
                return json{{"family", "table"}, {"entries", entries}, {"default", fam.fallback}};
            }
        },
        w.family());
}

WeightSpec weight_from_json(const json& j) {
    if (!j.is_object() || !j.contains("family"))
        throw std::invalid_argument("weight: expected an object with a \"family\" field");
    const std::string family = j.at("family").get<std::string>();
    if (family == "constant") return WeightSpec::constant(j.at("c").get<double>());
    if (family == "step") {
        std::vector<std::int64_t> dir;
        for (const auto& c : j.at("direction")) dir.push_back(c.get<std::int64_t>());
        return WeightSpec::step(j.at("v_neg").get<double>(), j.at("v_pos").get<double>(),
                                std::move(dir), j.value("pivot", std::int64_t{0}));
    }
    if (family == "power_law") {
        std::vector<std::int64_t> dir;
        for (const auto& c : j.at("direction")) dir.push_back(c.get<std::int64_t>());
        return WeightSpec::power_law(j.at("gamma").get<double>(), std::move(dir));
    }
    if (family == "table") {
        std::map<GroupPoint, double> entries;
        for (const auto& e : j.at("entries")) {
            if (!e.is_array() || e.size() != 2)
                throw std::invalid_argument("table weight: entries must be [point, value] pairs");
            entries[point_from_json(e.at(0))] = e.at(1).get<double>();
        }
        return WeightSpec::table(std::move(entries), j.at("default").get<double>());
    }
    throw std::invalid_argument("weight: unknown family \"" + family + "\"");
}

json to_json(const LatticeFunction& f) {
    json points = json::array();
    for (const auto& [x, v] : f.entries()) points.push_back(json::array({to_json(x), v}));
    return json{{"model", to_json(f.model())}, {"points", points}};
}

LatticeFunction function_from_json(const json& j) {
    if (!j.is_object() || !j.contains("model") || !j.contains("points"))
        throw std::invalid_argument("function: expected an object with \"model\" and \"points\"");
    LatticeFunction f(model_from_json(j.at("model")));
    for (const auto& e : j.at("points")) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("function: points must be [point, value] pairs");
        const auto x = f.model().make_point(point_from_json(e.at(0)).coords);
        f.set(x, f.at(x) + e.at(1).get<double>());
    }
    return f;
}

json to_json(const HorizonResult& h) {
    if (std::holds_alternative<Periodic>(h)) return json{{"kind", "periodic"}};
    return json{{"kind", "horizon"}, {"n", std::get<Horizon>(h).n}};
}

json to_json(const WitnessSchedule& sched) {
    return json{{"eps", sched.eps},
                {"deficit", sched.deficit},
                {"n_max", sched.n_max},
                {"k_max", sched.k_max}};
}

json to_json(const StageDiagnostic& row) {
    json out{{"k", row.k},
             {"eps", row.eps_k},
             {"deficit_allowed", row.deficit_allowed},
             {"n", row.n},
             {"deficit", row.deficit},
             {"admissible", row.admissible},
             {"log_sup_forward", json_num(row.log_sup_forward)},
             {"log_sup_backward_inv", json_num(row.log_sup_backward_inv)},
             {"sup_forward", json_num(std::exp(row.log_sup_forward))},
             {"sup_backward_inv", json_num(std::exp(row.log_sup_backward_inv))}};
    if (row.log_sup_ratio.has_value()) {
        out["log_sup_ratio"] = json_num(*row.log_sup_ratio);
        out["sup_ratio"] = json_num(std::exp(*row.log_sup_ratio));
    }
    return out;
}

json to_json(const Verdict& v) {
    json out;
    switch (v.kind) {
        case VerdictKind::Satisfied: out["kind"] = "satisfied"; break;
        case VerdictKind::Refuted: out["kind"] = "refuted"; break;
        default: out["kind"] = "budget_exhausted"; break;
    }
    json witness = json::array();
    for (const auto& w : v.witness)
        witness.push_back(json{{"k", w.k}, {"n", w.n}, {"E", to_json(w.E)}});
    out["witness"] = witness;
    if (v.monotone.has_value())
        out["monotone_certificate"] =
            json{{"c", v.monotone->c}, {"reason", v.monotone->reason}};
    if (v.reciprocal.has_value()) {
        const auto& r = *v.reciprocal;
        out["reciprocal_certificate"] = json{{"pair_j", r.pair_j},
                                             {"pair_l", r.pair_l},
                                             {"k", r.k},
                                             {"eps_k", r.eps_k},
                                             {"deficit_k", r.deficit_k},
                                             {"measure_K", r.measure_K},
                                             {"n_checked", r.n_checked},
                                             {"max_abs_log_residual", r.max_abs_log_residual},
                                             {"reason", r.reason}};
    }
    json diags = json::array();
    for (const auto& d : v.diagnostics) diags.push_back(to_json(d));
    out["diagnostics"] = diags;
    if (!v.note.empty()) out["note"] = v.note;
    return out;
}

json to_json(const CriterionReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows) {
        rows.push_back(json{{"n", r.n},
                            {"forward", json_num(r.forward)},
                            {"inverse", json_num(r.inverse)},
                            {"cross", json_num(r.cross)},
                            {"cross_arg_l", r.cross_arg_l},
                            {"cross_arg_i", r.cross_arg_i},
                            {"cross_arg_test", r.cross_arg_test}});
    }
    json out{{"rows", rows}, {"satisfied", rep.satisfied}, {"tol", rep.tol}};
    if (!rep.failure.empty()) out["failure"] = rep.failure;
    return out;
}

namespace {

json vec_num(const std::vector<double>& v) {
    json out = json::array();
    for (const double x : v) out.push_back(json_num(x));
    return out;
}

json mat_num(const std::vector<std::vector<double>>& m) {
    json out = json::array();
    for (const auto& row : m) out.push_back(vec_num(row));
    return out;
}

}  // namespace

json to_json(const ProbeResult& rep) {
    json out{{"success", rep.success},
             {"n", rep.n},
             {"err_source", json_num(rep.err_source)},
             {"err_targets", vec_num(rep.err_targets)},
             {"inverse_block", vec_num(rep.inverse_block)},
             {"forward_block", vec_num(rep.forward_block)},
             {"cross_block", mat_num(rep.cross_block)}};
    if (rep.u.has_value()) out["u"] = to_json(*rep.u);
    if (!rep.blame.empty()) out["blame"] = rep.blame;
    return out;
}

json to_json(const TransitReport& rep) {
    const auto blocks = [](const BlockNorms& b) {
        return json{{"forward_pow", vec_num(b.forward_pow)},
                    {"inverse_pow", vec_num(b.inverse_pow)},
                    {"cross_pow", mat_num(b.cross_pow)}};
    };
    json out{{"n", rep.n},
             {"E", to_json(rep.E)},
             {"K", to_json(rep.K)},
             {"deficit_measure", rep.deficit_measure},
             {"blocks", blocks(rep.blocks)},
             {"blocks_operator", blocks(rep.blocks_operator)},
             {"max_rel_discrepancy", json_num(rep.max_rel_discrepancy)},
             {"err_source_pow", json_num(rep.err_source_pow)},
             {"err_target_pow", vec_num(rep.err_target_pow)},
             {"bound_source_pow", json_num(rep.bound_source_pow)},
             {"bound_target_pow", vec_num(rep.bound_target_pow)},
             {"source_blocks_disjoint", rep.source_blocks_disjoint},
             {"source_decomposition_holds", rep.source_decomposition_holds}};
    json tbd = json::array();
    for (const char c : rep.target_blocks_disjoint) tbd.push_back(c != 0);
    out["target_blocks_disjoint"] = tbd;
    json tdh = json::array();
    for (const char c : rep.target_decomposition_holds) tdh.push_back(c != 0);
    out["target_decomposition_holds"] = tdh;
    if (rep.u.has_value()) out["u"] = to_json(*rep.u);
    return out;
}

json to_json(const DeviationSets& rep) {
    json out{{"eta", rep.eta},
             {"m", rep.m},
             {"far_from_one", to_json(rep.far_from_one)},
             {"mass_outside", to_json(rep.mass_outside)},
             {"excluded", to_json(rep.excluded)},
             {"core", to_json(rep.core)},
             {"premise_source_ok", rep.premise_source_ok},
             {"premise_ok", rep.premise_ok},
             {"bounds_ok", rep.bounds_ok},
             {"violated", rep.violated},
             {"removed_measure", rep.removed_measure},
             {"removed_bound", rep.removed_bound},
             {"log_sup_forward", vec_num(rep.log_sup_forward)},
             {"log_sup_backward_inv", vec_num(rep.log_sup_backward_inv)},
             {"log_sup_ratio", mat_num(rep.log_sup_ratio)}};
    json pio = json::array();
    for (const char c : rep.premise_image_ok) pio.push_back(c != 0);
    out["premise_image_ok"] = pio;
    json per_op = json::array();
    for (std::size_t l = 0; l < rep.image_far_from_one.size(); ++l) {
        per_op.push_back(json{{"image_far_from_one", to_json(rep.image_far_from_one[l])},
                              {"forward_mass", to_json(rep.forward_mass[l])},
                              {"image_mass_outside", to_json(rep.image_mass_outside[l])}});
    }
    out["per_operator"] = per_op;
    return out;
}

json to_json(const SynthesisReport& rep) {
    json out{{"success", rep.success},
             {"times", rep.times},
             {"per_term_threshold", rep.per_term_threshold},
             {"final_errors", mat_num(rep.final_errors)}};
    if (rep.u.has_value()) out["u"] = to_json(*rep.u);
    if (!rep.diagnostics.empty()) out["diagnostics"] = rep.diagnostics;
    return out;
}

json to_json(const OrbitSeries& series) {
    json pts = json::array();
    for (const auto& pt : series.points)
        pts.push_back(json{{"n", pt.n},
                           {"distance", json_num(pt.distance)},
                           {"per_op", vec_num(pt.per_op)}});
    return json{{"points", pts}};
}

}  // namespace hyperlab
