#include "caravan/json_io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace caravan::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const json& expect(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing key: ") + key);
  return j.at(key);
}

std::string expect_string(const json& j, const char* what) {
  if (!j.is_string()) fail(std::string(what) + " must be a string");
  return j.get<std::string>();
}

long long to_int64(const Int& v, const char* what) {
  static const Int lo = std::numeric_limits<long long>::min();
  static const Int hi = std::numeric_limits<long long>::max();
  if (v < lo || v > hi) throw InternalError(std::string(what) + " exceeds 64-bit range");
  return v.convert_to<long long>();
}

}  // namespace

json to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  return Rational::parse(expect_string(j, "rational"));
}

json to_json(const scalars::ScalarField& f) {
  json embeddings = json::array();
  for (const auto& e : f.embeddings()) embeddings.push_back(to_json(e));
  return json{{"symbols", f.symbols()}, {"embeddings", embeddings}};
}

scalars::FieldPtr field_from_json(const json& j) {
  const json& symbols = expect(j, "symbols");
  const json& embeddings = expect(j, "embeddings");
  if (!symbols.is_array() || !embeddings.is_array()) fail("field symbols/embeddings must be arrays");
  std::vector<std::string> names;
  for (const auto& s : symbols) names.push_back(expect_string(s, "symbol"));
  std::vector<Rational> values;
  for (const auto& e : embeddings) values.push_back(rational_from_json(e));
  try {
    return scalars::make_field(std::move(names), std::move(values));
  } catch (const InvalidInputError& e) {
    fail(std::string("bad field: ") + e.what());
  }
}

json to_json(const scalars::RealValue& v) {
  json coords = json::array();
  for (const auto& c : v.coords()) coords.push_back(to_json(c));
  return json{{"coords", coords}};
}

scalars::RealValue real_from_json(const json& j, const scalars::FieldPtr& field) {
  const json& coords = expect(j, "coords");
  if (!coords.is_array()) fail("coords must be an array");
  std::vector<Rational> values;
  for (const auto& c : coords) values.push_back(rational_from_json(c));
  try {
    return scalars::RealValue(field, std::move(values));
  } catch (const InvalidInputError& e) {
    fail(std::string("bad value: ") + e.what());
  }
}

json to_json(const arcs::Matching& m) {
  json out = json::array();
  for (const auto& p : m.pairs()) out.push_back(json::array({p.left, p.right}));
  return out;
}

arcs::Matching matching_from_json(const json& j) {
  if (!j.is_array()) fail("matching must be an array of [l, r] pairs");
  std::vector<arcs::IndexPair> pairs;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
      fail("matching entry must be a pair of integers");
    }
    pairs.push_back({p[0].get<int>(), p[1].get<int>()});
  }
  try {
    return arcs::Matching(std::move(pairs));
  } catch (const InvalidInputError& e) {
    fail(std::string("bad matching: ") + e.what());
  }
}

namespace {

json point_to_json(const cut::CutPoint& pt) {
  return json{{"re", to_json(pt.re)}, {"im", to_json(pt.im)}};
}

cut::CutPoint point_from_json(const json& j, const scalars::FieldPtr& field) {
  return {real_from_json(expect(j, "re"), field), real_from_json(expect(j, "im"), field)};
}

}  // namespace

json to_json(const cut::CutDiagram& d) {
  json pairs = json::array();
  for (const auto& pr : d.pairs()) {
    pairs.push_back(json{{"p", point_to_json(pr.p)}, {"q", point_to_json(pr.q)}});
  }
  return json{{"field", to_json(*d.field())}, {"pairs", pairs}};
}

cut::CutDiagram cut_diagram_from_json(const json& j) {
  scalars::FieldPtr field = field_from_json(expect(j, "field"));
  const json& pairs = expect(j, "pairs");
  if (!pairs.is_array()) fail("pairs must be an array");
  std::vector<cut::CutPair> out;
  for (const auto& pr : pairs) {
    out.push_back({point_from_json(expect(pr, "p"), field), point_from_json(expect(pr, "q"), field)});
  }
  try {
    return cut::CutDiagram(field, std::move(out));
  } catch (const InvalidInputError& e) {
    fail(std::string("bad cut diagram: ") + e.what());
  }
}

json to_json(const strata::G1Configuration& c) {
  if (c.is_smooth()) {
    json pairs = json::array();
    for (const cut::CutPair* pr : {&c.pair1(), &c.pair2()}) {
      pairs.push_back(json{{"p", point_to_json(pr->p)}, {"q", point_to_json(pr->q)}});
    }
    return json{{"kind", "smooth"}, {"field", to_json(*c.field())}, {"pairs", pairs}};
  }
  return json{{"kind", "singular"},
              {"field", to_json(*c.field())},
              {"node", json{{"re", to_json(c.node_re())}, {"im", to_json(c.node_im())}}}};
}

strata::G1Configuration g1_from_json(const json& j) {
  std::string kind = expect_string(expect(j, "kind"), "kind");
  scalars::FieldPtr field = field_from_json(expect(j, "field"));
  try {
    if (kind == "smooth") {
      const json& pairs = expect(j, "pairs");
      if (!pairs.is_array() || pairs.size() != 2) fail("smooth configuration needs two pairs");
      cut::CutPair p1{point_from_json(expect(pairs[0], "p"), field),
                      point_from_json(expect(pairs[0], "q"), field)};
      cut::CutPair p2{point_from_json(expect(pairs[1], "p"), field),
                      point_from_json(expect(pairs[1], "q"), field)};
      return strata::G1Configuration::smooth(field, std::move(p1), std::move(p2));
    }
    if (kind == "singular") {
      const json& node = expect(j, "node");
      return strata::G1Configuration::singular(field, real_from_json(expect(node, "re"), field),
                                               real_from_json(expect(node, "im"), field));
    }
  } catch (const InvalidInputError& e) {
    fail(std::string("bad configuration: ") + e.what());
  }
  fail("kind must be \"smooth\" or \"singular\"");
}

json to_json(const rel::IntMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.size(); ++j) row.push_back(to_int64(m.at(i, j), "matrix entry"));
    rows.push_back(row);
  }
  return rows;
}

std::string trace_to_jsonl(const rel::MoveTrace& trace) {
  std::ostringstream out;
  std::size_t next_mark = 0;
  auto emit_marks_until = [&](std::size_t event_index) {
    while (next_mark < trace.marks.size() && trace.marks[next_mark].event_index <= event_index) {
      const auto& mark = trace.marks[next_mark];
      json j{{"type", "mark"}, {"block", mark.block}};
      switch (mark.kind) {
        case rel::MarkKind::Step1Begin:
          j["kind"] = "step1-begin";
          break;
        case rel::MarkKind::Step2Enter:
          j["kind"] = "step2-enter";
          break;
        case rel::MarkKind::Step2Iteration:
          j["kind"] = "step2-iteration";
          j["left"] = mark.left_count;
          j["right"] = mark.right_count;
          break;
        case rel::MarkKind::Step2Isolated:
          j["kind"] = "step2-isolated";
          break;
        case rel::MarkKind::EpochRestart:
          j["kind"] = "epoch-restart";
          break;
        case rel::MarkKind::BlockDone:
          j["kind"] = "block-done";
          break;
      }
      out << j.dump() << "\n";
      ++next_mark;
    }
  };
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    emit_marks_until(i);
    const auto& ev = trace.events[i];
    json j{{"type", "switch"},
           {"moving", ev.moving_arc},
           {"static", ev.static_arc},
           {"position", to_json(ev.position)},
           {"entry", json::array({ev.elem.row, ev.elem.col, ev.elem.sign})}};
    out << j.dump() << "\n";
  }
  emit_marks_until(trace.events.size());
  return out.str();
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
}

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str());
}

}  // namespace caravan::io
