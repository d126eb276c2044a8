#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "enriched/actions.hpp"
#include "enriched/ggraph.hpp"
#include "enriched/operators.hpp"
#include "enriched/persistence.hpp"

namespace enriched::io {

using Json = nlohmann::ordered_json;

// Throws InputError on unreadable files or malformed JSON.
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Rational parse_rational(const Json& value);
Json rational_to_json(const Rational& q);

// {"domain":[ids], "measurements":{name:[values]}, "allow_empty":bool?}
DataSet parse_dataset(const Json& j);
Json dataset_to_json(const DataSet& data);

// {"x1":"x2",...} over the given domains.
PointMap parse_point_table(const Json& j, const Domain& source, const Domain& target);
Json point_table_to_json(const PointMap& f);
// {"source":[ids], "target":[ids], "map":{...}}
PointMap parse_point_map(const Json& j);

// {"builtin":"identity"|"negate"|"clamp-sign"|"affine","a":..,"b":..} or {"table":{"1":"-1"}}
ValueMap parse_value_map(const Json& j);

// {"dataset":{...}, "M":{"g":{"x1":"x2"} | "identity"}}. "M" may be omitted for {id}.
Incarnation parse_incarnation(const Json& j);
Json incarnation_to_json(const Incarnation& inc);

// Either an incarnation or a bare data set (M = {id}).
Incarnation parse_incarnation_or_dataset(const Json& j);

// {"phi":"psi",...} by measurement names.
SetMap parse_measurement_map(const Json& j, const DataSet& source, const DataSet& target);
// {"g":"h",...} by operation names.
SetMap parse_operation_map(const Json& j, const Incarnation& source, const Incarnation& target);

Json seo_to_json(const Seo& seo);

Json analysis_report(const Incarnation& inc);

Json graph_to_json(const GrothendieckGraph& g);
GrothendieckGraph graph_from_json(const Json& j);

Json matrix_to_json(const FpMatrix& m);
// {"r":[...], "s":[...], "dims":[[...]], "maps":{"r":[[rank]], "s":[[rank]]}}
Json grid_to_json(const BigradedPersistence& module, bool with_maps = true);
Json morphism_to_json(const GridMorphism& m);

// r,s_birth,s_death,degree lines; "inf" for essential bars.
std::string barcode_csv(const Rational& r, const Barcode& bars, std::size_t degree);

Json error_to_json(const Error& e, const std::string& kind);

}  // namespace enriched::io
