#pragma once

#include <string>

#include "json.hpp"

#include "caravan/cut_diagram.hpp"
#include "caravan/matching.hpp"
#include "caravan/rel_moves.hpp"
#include "caravan/strata_g1.hpp"

namespace caravan::io {

using nlohmann::json;

json to_json(const Rational& r);
Rational rational_from_json(const json& j);

json to_json(const scalars::ScalarField& f);
scalars::FieldPtr field_from_json(const json& j);

json to_json(const scalars::RealValue& v);
scalars::RealValue real_from_json(const json& j, const scalars::FieldPtr& field);

json to_json(const arcs::Matching& m);
arcs::Matching matching_from_json(const json& j);

json to_json(const cut::CutDiagram& d);
cut::CutDiagram cut_diagram_from_json(const json& j);

json to_json(const strata::G1Configuration& c);
strata::G1Configuration g1_from_json(const json& j);

json to_json(const rel::IntMatrix& m);

// One JSON object per line: switch events and phase marks in order.
std::string trace_to_jsonl(const rel::MoveTrace& trace);

json parse_text(const std::string& text);
json parse_file(const std::string& path);

}  // namespace caravan::io
