#pragma once

#include <string>

#include <json.hpp>

#include "fflab/constructions.hpp"
#include "fflab/field.hpp"
#include "fflab/geometry.hpp"
#include "fflab/gridset.hpp"
#include "fflab/incidence.hpp"

namespace fflab {

using json = nlohmann::json;

// Wire formats: a field is {"p", "m", "modulus"} with the modulus omitted for
// m = 1; an element is a bare integer for m = 1, else the m coefficients
// constant term first; a point is an array of elements; a line is
// {"base", "dir"} with the direction re-canonicalized on load.

json field_to_json(const Field& f);
Field field_from_json(const json& j);

json elem_to_json(const Field& f, FieldElem e);
FieldElem elem_from_json(const Field& f, const json& j);

json point_to_json(const Field& f, const Point& pt);
Point point_from_json(const Field& f, const json& j);

json direction_to_json(const Field& f, const Direction& d);
Direction direction_from_json(const Field& f, const json& j);

json line_to_json(const Field& f, const Line& l);
Line line_from_json(const Field& f, const json& j);

json delta_to_json(const DeltaSystem& d);
DeltaSystem delta_from_json(const json& j);
json delta_report_to_json(const DeltaReport& r);
DeltaReport delta_report_from_json(const json& j);

json instance_to_json(const FurstenbergInstance& inst);
FurstenbergInstance instance_from_json(const json& j);

json grid_to_json(const GridSet& g);
GridSet grid_from_json(const json& j);

json certificate_to_json(const RefineCertificate& c);
RefineCertificate certificate_from_json(const json& j);

json check_report_to_json(const Field& f, const CheckReport& r);
CheckReport check_report_from_json(const Field& f, const json& j);

json pair_count_to_json(const PairCountReport& r);
PairCountReport pair_count_from_json(const json& j);

json pipeline_report_to_json(const Field& f, const PipelineReport& r);
PipelineReport pipeline_report_from_json(const Field& f, const json& j);

/// CSV with a header row: richness,line_count.
std::string histogram_to_csv(const std::map<long long, long long>& h);

}  // namespace fflab
