#pragma once

#include <json.hpp>

#include "hyperlab/constructions.hpp"
#include "hyperlab/criteria.hpp"

namespace hyperlab {

using json = nlohmann::json;

// Non-finite doubles have no JSON number representation; they serialize as
// null so that reports stay machine readable.
json json_num(double v);

json to_json(const GroupModel& model);
GroupModel model_from_json(const json& j);

json to_json(const GroupPoint& x);
GroupPoint point_from_json(const json& j);

json to_json(const CompactRegion& region);
CompactRegion region_from_json(const json& j, const GroupModel& model);

json to_json(const WeightSpec& w);
WeightSpec weight_from_json(const json& j);

json to_json(const LatticeFunction& f);
LatticeFunction function_from_json(const json& j);

json to_json(const HorizonResult& h);
json to_json(const WitnessSchedule& sched);
json to_json(const StageDiagnostic& row);
json to_json(const Verdict& v);
json to_json(const CriterionReport& rep);
json to_json(const ProbeResult& rep);
json to_json(const TransitReport& rep);
json to_json(const DeviationSets& rep);
json to_json(const SynthesisReport& rep);
json to_json(const OrbitSeries& series);

}  // namespace hyperlab
