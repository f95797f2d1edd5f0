#include "caravan/cli.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "caravan/json_io.hpp"
#include "caravan/svg.hpp"

namespace caravan::cli {

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;
constexpr int kAbort = 3;

void print_violations(const std::vector<cut::Violation>& violations, std::ostream& out) {
  out << "valid: false\n";
  for (const auto& v : violations) {
    out << "violation: " << v.code << " pair=" << v.pair_index;
    if (v.other_index >= 0) out << " other=" << v.other_index;
    if (!v.detail.empty()) out << " (" << v.detail << ")";
    out << "\n";
  }
}

int cmd_enumerate(int genus, bool nondegenerate_only, bool count_only, std::ostream& out) {
  std::uint64_t count = 0;
  arcs::enumerate_matchings(2 * genus, [&](const arcs::Matching& m) {
    if (nondegenerate_only && !arcs::is_nondegenerate(m)) return;
    if (count_only) {
      ++count;
    } else {
      out << io::to_json(m).dump() << "\n";
    }
  });
  if (count_only) out << count << "\n";
  return kOk;
}

int cmd_check(const std::string& path, bool require_single_pole, std::ostream& out) {
  cut::CutDiagram diagram = io::cut_diagram_from_json(io::parse_file(path));
  auto violations = cut::validate(diagram, /*require_generic=*/true);
  if (!violations.empty()) {
    print_violations(violations, out);
    return kNegative;
  }
  out << "valid: true\n";
  cut::SurfaceReport report = cut::build_surface(diagram);
  out << "arc-diagram: " << io::to_json(arc_diagram(diagram)).dump() << "\n";
  out << "genus: " << report.genus << "\n";
  out << "poles: [";
  for (std::size_t i = 0; i < report.pole_orders.size(); ++i) {
    out << (i ? "," : "") << report.pole_orders[i];
  }
  out << "]\n";
  out << "nondegenerate: " << (report.nondegenerate ? "true" : "false") << "\n";
  out << "periods:";
  for (const auto& p : report.periods) out << " " << p.str();
  out << "\n";
  scalars::PeriodLattice lattice = cut::period_lattice(diagram);
  int rank = scalars::q_rank(lattice);
  out << "lattice-rank: " << rank << "\n";
  out << "discrete: " << (scalars::is_discrete(lattice) ? "true" : "false") << "\n";
  int g = report.genus;
  bool incommensurable = g >= 1 && scalars::is_totally_incommensurable(lattice, g);
  out << "totally-incommensurable: " << (incommensurable ? "true" : "false") << "\n";
  if (require_single_pole && report.n_poles != 1) return kNegative;
  return kOk;
}

// Flattened diagrams (equal heights) are fine here; only the per-pair
// constraints and distinct projections matter.
std::optional<rel::MetricArcDiagram> load_metric(const std::string& path, std::ostream& err) {
  cut::CutDiagram diagram = io::cut_diagram_from_json(io::parse_file(path));
  auto violations = cut::validate(diagram, /*require_generic=*/false);
  if (!violations.empty()) {
    print_violations(violations, err);
    return std::nullopt;
  }
  try {
    return rel::MetricArcDiagram::from_cut_diagram(diagram);
  } catch (const InvalidInputError& e) {
    err << "violation: " << e.what() << "\n";
    return std::nullopt;
  }
}

int cmd_normalize(const std::string& path, const std::string& trace_path, std::ostream& out,
                  std::ostream& err) {
  auto maybe_metric = load_metric(path, err);
  if (!maybe_metric) return kNegative;
  rel::MetricArcDiagram metric = *maybe_metric;
  rel::NormalizeResult result = [&] {
    try {
      return rel::caravan_normalize(metric);
    } catch (const rel::NormalizeAbort& abort) {
      if (!trace_path.empty()) {
        std::ofstream trace_out(trace_path);
        trace_out << io::trace_to_jsonl(abort.partial_trace);
      }
      throw;
    }
  }();
  io::json output{{"diagram", io::to_json(result.diagram.to_cut_diagram())},
                  {"matrix", io::to_json(result.matrix)}};
  out << output.dump(2) << "\n";
  if (!trace_path.empty()) {
    std::ofstream trace_out(trace_path);
    if (!trace_out) throw ParseError("cannot write trace file: " + trace_path);
    trace_out << io::trace_to_jsonl(result.trace);
  }
  return kOk;
}

int cmd_leaf(const std::string& path1, const std::string& path2, std::ostream& out,
             std::ostream& err) {
  auto m1 = load_metric(path1, err);
  auto m2 = load_metric(path2, err);
  if (!m1 || !m2) return kUsage;
  try {
    rel::LeafObstructionReport report = rel::leaf_obstruction(*m1, *m2);
    out << "matrix: " << io::to_json(report.matrix).dump() << "\n";
    out << "det: " << report.matrix.determinant().str() << "\n";
    out << "symplectic: " << (report.symplectic ? "true" : "false") << "\n";
    out << (report.symplectic ? "verdict: compatible bases\n"
                              : "verdict: distinct connected components\n");
    return report.symplectic ? kOk : kNegative;
  } catch (const DomainError& e) {
    err << "precondition failed: " << e.what() << "\n";
    return kUsage;
  }
}

int cmd_classify(const std::string& path, std::ostream& out) {
  strata::G1Configuration config = io::g1_from_json(io::parse_file(path));
  strata::StratumLabel label = strata::classify(config);
  out << "stratum: " << label.str() << "\n";
  out << "dimension: " << label.dimension() << "\n";
  io::json attach = io::json::array();
  for (const auto& a : strata::attachment(label)) attach.push_back(a.str());
  out << "attached-to: " << attach.dump() << "\n";
  return kOk;
}

int cmd_render(const std::string& path, const std::string& out_path, std::ostream&) {
  io::json j = io::parse_file(path);
  std::string svg_text;
  if (j.is_object() && j.contains("kind")) {
    svg_text = svg::render(io::g1_from_json(j));
  } else {
    svg_text = svg::render(io::cut_diagram_from_json(j));
  }
  std::ofstream out_file(out_path);
  if (!out_file) throw ParseError("cannot write output file: " + out_path);
  out_file << svg_text;
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact cut-diagram toolkit for real-normalized differentials with one double pole"};
  app.require_subcommand(1);

  int genus = 1;
  bool nondegenerate_only = false;
  bool count_only = false;
  auto* enumerate = app.add_subcommand("enumerate", "Enumerate arc diagrams with 2g arcs");
  enumerate->add_option("--genus", genus, "Genus g (arcs = 2g)")
      ->required()
      ->check(CLI::Range(1, 4));
  enumerate->add_flag("--nondegenerate", nondegenerate_only, "Keep nondegenerate diagrams only");
  enumerate->add_flag("--count-only", count_only, "Print the count instead of the diagrams");

  std::string check_file;
  bool require_single_pole = false;
  auto* check = app.add_subcommand("check", "Validate a cut diagram and report the glued surface");
  check->add_option("file", check_file, "Cut diagram JSON")->required();
  check->add_flag("--require-single-pole", require_single_pole,
                  "Exit 1 unless the diagram is nondegenerate");

  std::string normalize_file;
  std::string trace_file;
  auto* normalize = app.add_subcommand("normalize", "Reduce a cut diagram to its caravan form");
  normalize->add_option("file", normalize_file, "Cut diagram JSON")->required();
  normalize->add_option("--trace", trace_file, "Write the move trace as JSON lines");

  std::string leaf_file1, leaf_file2;
  auto* leaf = app.add_subcommand("leaf", "Compare two diagrams within one period locus");
  leaf->add_option("file1", leaf_file1, "First cut diagram JSON")->required();
  leaf->add_option("file2", leaf_file2, "Second cut diagram JSON")->required();

  std::string classify_file;
  auto* classify = app.add_subcommand("classify-g1", "Classify a genus-1 configuration");
  classify->add_option("file", classify_file, "Configuration JSON")->required();

  std::string render_file, render_out = "out.svg";
  auto* render = app.add_subcommand("render", "Render a diagram or configuration as SVG");
  render->add_option("file", render_file, "Input JSON")->required();
  render->add_option("-o,--output", render_out, "Output SVG path");

  std::vector<std::string> argv_like = args;
  argv_like.insert(argv_like.begin(), "caravan");
  std::vector<const char*> argv;
  argv.reserve(argv_like.size());
  for (const auto& a : argv_like) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  try {
    if (enumerate->parsed()) return cmd_enumerate(genus, nondegenerate_only, count_only, out);
    if (check->parsed()) return cmd_check(check_file, require_single_pole, out);
    if (normalize->parsed()) return cmd_normalize(normalize_file, trace_file, out, err);
    if (leaf->parsed()) return cmd_leaf(leaf_file1, leaf_file2, out, err);
    if (classify->parsed()) return cmd_classify(classify_file, out);
    if (render->parsed()) return cmd_render(render_file, render_out, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const AmbiguousCollisionError& e) {
    err << "aborted: " << e.what() << "\n";
    return kAbort;
  } catch (const UnclassifiableError& e) {
    err << "unclassifiable: " << e.what() << "\n";
    return kNegative;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kNegative;
  } catch (const InvalidInputError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNegative;
  }
  err << "no command\n";
  return kUsage;
}

}  // namespace caravan::cli
