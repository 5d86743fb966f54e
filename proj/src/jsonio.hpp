#pragma once

#include "measure.hpp"
#include "modes.hpp"
#include "order.hpp"

namespace modelab {

inline constexpr const char* kMeasureSchema = "modelab/measure-v1";

Json scalar_to_json(const Surd& v);
Surd scalar_from_json(const Json& j);
Json mass_to_json(const Mass& m);

Json point_to_json(const Point& p);
Point point_from_json(const Json& j);

Json profile_to_json(const SelfSimilarProfile& p);
SelfSimilarProfile profile_from_json(const Json& j);

MeasurePtr measure_from_json(const Json& j);

Json verdict_to_json(const ComparisonVerdict& v);
Json ratio_limits_to_json(const RatioLimits& rl);
Json mode_report_to_json(const ModeReport& r);
Json amf_to_json(const AmfRecord& a);

}  // namespace modelab
