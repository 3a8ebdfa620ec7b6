#include "cli/run.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cli/group_spec.hpp"
#include "growthlab/concat.hpp"
#include "growthlab/function_spec.hpp"
#include "growthlab/hyperbolic.hpp"
#include "growthlab/rate.hpp"
#include "growthlab/subgroup.hpp"

namespace growthlab::cli {

namespace {

using nlohmann::json;

std::string csv_header(const ExperimentSpec& spec) {
  return std::string("# growthlab ") + kToolVersion + "\n# spec: " + provenance(spec) + "\n";
}

json json_header(const ExperimentSpec& spec) {
  return json{{"tool", "growthlab"}, {"version", kToolVersion}, {"spec", provenance(spec)}};
}

std::string extension(const ExperimentSpec& spec) { return spec.resolved_format() == OutputFormat::csv ? "csv" : "json"; }

Artifact make(const ExperimentSpec& spec, std::string content) {
  Artifact a;
  a.filename = std::string(to_string(spec.command)) + "." + extension(spec);
  a.content = std::move(content);
  return a;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Budget budget_of(const ExperimentSpec& spec) { return Budget{spec.budget_elements, spec.workers}; }

std::vector<Element> parse_list(const GroupDescriptor& group, const std::string& text) {
  std::vector<Element> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || (text[i] == ',' && depth == 0)) {
      out.push_back(parse_element(group, text.substr(start, i - start)));
      start = i + 1;
    } else if (text[i] == '(') {
      ++depth;
    } else if (text[i] == ')') {
      --depth;
    }
  }
  return out;
}

json pairs_json(const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  json out = json::array();
  for (auto [a, b] : pairs) out.push_back(json::array({a, b}));
  return out;
}

std::string table_artifact(const ExperimentSpec& spec, const GrowthTable& table, bool with_unknown,
                           const std::string& note) {
  if (spec.resolved_format() == OutputFormat::json) {
    json j = json_header(spec);
    if (!note.empty()) j["partial"] = note;
    j["counts"] = table.counts;
    j["spheres"] = table.spheres();
    if (with_unknown) j["unknown"] = table.unknown;
    if (table.milnor_checked) j["milnor_violations"] = pairs_json(table.milnor_violations);
    return dump(j);
  }
  std::string out = csv_header(spec);
  if (!note.empty()) out += "# partial: " + note + "\n";
  out += with_unknown ? "radius,count,unknown\n" : "radius,count\n";
  for (std::size_t n = 0; n < table.counts.size(); ++n) {
    out += std::to_string(n) + "," + std::to_string(table.counts[n]);
    if (with_unknown) out += "," + std::to_string(n < table.unknown.size() ? table.unknown[n] : 0);
    out += "\n";
  }
  return out;
}

GrowthTable compute_table(const ExperimentSpec& spec, const GroupDescriptor& group, const SubgroupOracle* oracle) {
  return spec.method == GrowthMethod::count ? count_growth(group, oracle, spec.max_radius, budget_of(spec))
                                            : growth_sequence(group, oracle, spec.max_radius, budget_of(spec));
}

Artifact growth_like(const ExperimentSpec& spec) {
  const GroupDescriptor group = parse_group_spec(spec.group);
  std::optional<SubgroupOracle> oracle;
  if (spec.command == Command::relgrowth) oracle = parse_subgroup(group, *spec.subgroup);
  const SubgroupOracle* h = oracle ? &*oracle : nullptr;
  const bool with_unknown = h && !h->is_exact();
  try {
    const GrowthTable table = compute_table(spec, group, h);
    Artifact a = make(spec, table_artifact(spec, table, with_unknown, ""));
    if (!table.milnor_violations.empty()) a.exit_code = kExitHypothesis;
    return a;
  } catch (const GrowthBudgetExceeded& e) {
    const std::string note = "budget exceeded after radius " + std::to_string(e.radius_reached());
    Artifact a = make(spec, table_artifact(spec, e.partial(), with_unknown, note));
    a.exit_code = kExitBudget;
    a.budget_message = e.what();
    return a;
  }
}

Artifact distortion_cmd(const ExperimentSpec& spec) {
  const GroupDescriptor group = parse_group_spec(spec.group);
  const SubgroupOracle oracle = parse_subgroup(group, *spec.subgroup);
  const std::vector<Element> gens = spec.generators ? parse_list(group, *spec.generators) : oracle.generators();
  if (gens.empty()) throw Unsupported("distortion needs --generators for subgroup `" + *spec.subgroup + "`");
  std::vector<DistortionResult> rows;
  for (std::size_t n = 0; n <= spec.max_radius; ++n) rows.push_back(distortion(group, gens, oracle, n, budget_of(spec)));

  if (spec.resolved_format() == OutputFormat::json) {
    json j = json_header(spec);
    json values = json::array(), witnesses = json::array();
    for (const auto& r : rows) {
      values.push_back(r.value);
      witnesses.push_back(format_element(r.witness));
    }
    j["distortion"] = values;
    j["witness"] = witnesses;
    return make(spec, dump(j));
  }
  std::string out = csv_header(spec) + "radius,distortion,witness\n";
  for (std::size_t n = 0; n < rows.size(); ++n) {
    out += std::to_string(n) + "," + std::to_string(rows[n].value) + "," + format_element(rows[n].witness) + "\n";
  }
  return make(spec, out);
}

Artifact delta_cmd(const ExperimentSpec& spec) {
  FiniteMetric metric;
  std::vector<Element> points;
  if (spec.matrix) {
    std::ifstream in(*spec.matrix);
    if (!in) throw MalformedInput("cannot read matrix file `" + *spec.matrix + "`");
    metric = FiniteMetric::from_csv(in);
  } else {
    const GroupDescriptor group = parse_group_spec(spec.group);
    const Ball ball = spec.subgroup ? relative_ball(group, parse_subgroup(group, *spec.subgroup), spec.max_radius,
                                                    budget_of(spec))
                                    : enumerate_ball(group, spec.max_radius, budget_of(spec));
    points = ball.elements;
    metric = FiniteMetric::from_elements(points);
  }
  DeltaOptions opts;
  opts.mode = spec.random ? DeltaOptions::Mode::random : DeltaOptions::Mode::exhaustive;
  opts.trials = spec.trials;
  opts.seed = spec.seed;
  opts.max_tuples = spec.max_tuples;
  opts.workers = spec.workers;
  const DeltaEstimate est = estimate_delta(metric, opts);

  auto label = [&](std::size_t i) { return points.empty() ? std::to_string(i) : format_element(points[i]); };
  if (spec.resolved_format() == OutputFormat::json) {
    json j = json_header(spec);
    j["points"] = metric.size();
    j["mode"] = spec.random ? "random" : "exhaustive";
    j["delta"] = est.delta.value();
    j["witness"] = {label(est.witness[0]), label(est.witness[1]), label(est.witness[2]), label(est.witness[3])};
    j["tuples_checked"] = est.tuples_checked;
    return make(spec, dump(j));
  }
  std::string out = csv_header(spec) + "delta,o,x,y,z,tuples_checked\n" + est.delta.to_string();
  for (auto w : est.witness) out += "," + label(w);
  out += "," + std::to_string(est.tuples_checked) + "\n";
  return make(spec, out);
}

Artifact acyl_cmd(const ExperimentSpec& spec) {
  const GroupDescriptor group = parse_group_spec(spec.group);
  const Element x = parse_element(group, spec.x);
  const Element y = parse_element(group, spec.y);
  const auto result = acylindricity_witnesses(group, x, y, spec.eps);
  if (spec.resolved_format() == OutputFormat::json) {
    json j = json_header(spec);
    j["distance"] = distance(x, y);
    j["count"] = result.count;
    json w = json::array();
    for (const auto& g : result.witnesses) w.push_back(format_element(g));
    j["witnesses"] = w;
    return make(spec, dump(j));
  }
  std::string out = csv_header(spec) + "witness\n";
  for (const auto& g : result.witnesses) out += format_element(g) + "\n";
  return make(spec, out);
}

std::string ambiguity_artifact(const ExperimentSpec& spec, const AmbiguityReport& r, const std::string& note) {
  if (spec.resolved_format() == OutputFormat::json) {
    json j = json_header(spec);
    if (!note.empty()) j["partial"] = note;
    j["s_max"] = r.s_max;
    j["t_max"] = r.t_max;
    j["c"] = r.c;
    json cells = json::array();
    for (const auto& cell : r.cells) {
      cells.push_back({{"s", cell.s},
                       {"t", cell.t},
                       {"image_radius", cell.image_radius},
                       {"max_fiber", cell.max_fiber},
                       {"argmax_image", format_element(cell.argmax)}});
    }
    j["cells"] = cells;
    j["max_fiber_by_t"] = r.max_fiber_by_t;
    j["envelope"] = r.envelope.to_string();
    j["fit_t_max"] = r.fit_t_max;
    j["flagged"] = pairs_json(r.flagged);
    j["max_score"] = r.max_score.value();
    j["pairs"] = r.pairs;
    j["unknown_count"] = r.unknown_count;
    j["image_containment"] = r.image_containment;
    return dump(j);
  }
  std::string out = csv_header(spec);
  if (!note.empty()) out += "# partial: " + note + "\n";
  out += "# envelope: " + r.envelope.to_string() + " fitted on t <= " + std::to_string(r.fit_t_max) + "\n";
  out += "s,t,max_fiber,argmax_image\n";
  for (const auto& cell : r.cells) {
    out += std::to_string(cell.s) + "," + std::to_string(cell.t) + "," + std::to_string(cell.max_fiber) + "," +
           format_element(cell.argmax) + "\n";
  }
  return out;
}

Artifact ambiguity_cmd(const ExperimentSpec& spec) {
  const GroupDescriptor group = parse_group_spec(spec.group);
  std::optional<SubgroupOracle> oracle;
  if (spec.subgroup) oracle = parse_subgroup(group, *spec.subgroup);
  const SubgroupOracle* h = oracle ? &*oracle : nullptr;
  AmbiguityOptions opts;
  opts.fit_t_max = spec.fit_tmax;

  auto measure = [&]() -> AmbiguityReport {
    if (spec.naive) return measure_ambiguity(ConnectorKit::naive(group), h, spec.smax, spec.tmax, budget_of(spec), opts);
    if (spec.pieces) {
      return measure_ambiguity(ConnectorKit::from_pieces(group, parse_list(group, *spec.pieces)), h, spec.smax,
                               spec.tmax, budget_of(spec), opts);
    }
    const Element g = parse_element(group, spec.g);
    const Element hh = parse_element(group, spec.h);
    if (group.factor_count() == 1) {
      return measure_ambiguity(ConnectorKit::build(group, g, hh, spec.connector_power), h, spec.smax, spec.tmax,
                               budget_of(spec), opts);
    }
    std::vector<ConnectorKit> kits;
    for (std::size_t f = 0; f < group.factor_count(); ++f) {
      const GroupDescriptor factor = GroupDescriptor::free(group.rank(f));
      kits.push_back(ConnectorKit::build(factor, Element({g.component(f)}), Element({hh.component(f)}),
                                         spec.connector_power));
    }
    return measure_product_ambiguity(group, kits, h, spec.smax, spec.tmax, budget_of(spec), opts);
  };

  try {
    const AmbiguityReport report = measure();
    Artifact a = make(spec, ambiguity_artifact(spec, report, ""));
    if (!report.flagged.empty() || !report.image_containment) a.exit_code = kExitHypothesis;
    return a;
  } catch (const AmbiguityBudgetExceeded& e) {
    if (!e.partial()) throw;
    Artifact a = make(spec, ambiguity_artifact(spec, *e.partial(),
                                               "budget exceeded; s <= " + std::to_string(e.radius_reached())));
    a.exit_code = kExitBudget;
    a.budget_message = e.what();
    return a;
  }
}

Artifact rate_cmd(const ExperimentSpec& spec) {
  const GroupDescriptor group = parse_group_spec(spec.group);
  GrowthTable table;
  if (spec.input) {
    std::ifstream in(*spec.input);
    if (!in) throw MalformedInput("cannot read growth table `" + *spec.input + "`");
    table = read_growth_csv(in);
  } else {
    std::optional<SubgroupOracle> oracle;
    if (spec.subgroup) oracle = parse_subgroup(group, *spec.subgroup);
    table = compute_table(spec, group, oracle ? &*oracle : nullptr);
  }
  RateHypothesis hyp;
  hyp.epsilon = FunctionSpec::parse(spec.epsilon);
  hyp.shift = FunctionSpec::parse(spec.shift);
  hyp.threshold = spec.threshold;
  hyp.growth_bound = spec.bound.value_or(static_cast<double>(group.generator_count() + 1));
  const RateEstimate est = fekete_lower_bound(table, hyp);

  Artifact a;
  if (spec.resolved_format() == OutputFormat::json) {
    json j = json_header(spec);
    j["lower"] = est.certified_lower;
    j["upper"] = est.empirical_upper;
    j["witness_s"] = est.witness_s ? json(*est.witness_s) : json(nullptr);
    j["upper_witness_n"] = est.upper_witness_n;
    j["hypothesis_ok"] = est.hypothesis_ok;
    j["violations"] = pairs_json(est.check.violations);
    j["bound_violations"] = est.check.bound_violations;
    j["counts"] = table.counts;
    j["roots"] = est.roots;
    a = make(spec, dump(j));
  } else {
    std::ostringstream os;
    os.precision(17);
    os << csv_header(spec) << "# lower: " << est.certified_lower << "\n# upper: " << est.empirical_upper
       << "\n# hypothesis_ok: " << (est.hypothesis_ok ? "true" : "false") << "\nn,count,root\n";
    for (std::size_t n = 1; n < table.counts.size(); ++n) os << n << "," << table.counts[n] << "," << est.roots[n] << "\n";
    a = make(spec, os.str());
  }
  if (!est.hypothesis_ok) a.exit_code = kExitHypothesis;
  return a;
}

void emit_error(std::ostream& diag, const char* kind, const std::string& message, int code,
                std::optional<std::pair<std::size_t, std::size_t>> position = std::nullopt) {
  json j{{"error", {{"kind", kind}, {"message", message}}}, {"exit", code}};
  if (position) {
    j["error"]["line"] = position->first;
    j["error"]["column"] = position->second;
  }
  diag << j.dump() << std::endl;
}

int exit_for(const Error& e) {
  if (dynamic_cast<const BudgetExceeded*>(&e)) return kExitBudget;
  if (dynamic_cast<const MalformedInput*>(&e) || dynamic_cast<const DescriptorMismatch*>(&e)) return kExitParse;
  return kExitFailure;
}

}  // namespace

GrowthTable read_growth_csv(std::istream& in) {
  GrowthTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!std::isdigit(static_cast<unsigned char>(line[0]))) {
      if (t.counts.empty()) continue;  // header
      throw MalformedInput("growth table line " + std::to_string(line_no) + ": not a row");
    }
    std::istringstream row(line);
    std::size_t radius = 0;
    std::uint64_t count = 0;
    char comma = 0;
    if (!(row >> radius >> comma >> count) || comma != ',') {
      throw MalformedInput("growth table line " + std::to_string(line_no) + ": expected `radius,count`");
    }
    if (radius != t.counts.size()) {
      throw MalformedInput("growth table line " + std::to_string(line_no) + ": radii must run 0, 1, 2, ...");
    }
    t.counts.push_back(count);
  }
  if (t.counts.empty()) throw MalformedInput("growth table is empty");
  return t;
}

Artifact execute(const ExperimentSpec& spec) {
  switch (spec.command) {
    case Command::growth:
    case Command::relgrowth:
      return growth_like(spec);
    case Command::distortion:
      return distortion_cmd(spec);
    case Command::delta:
      return delta_cmd(spec);
    case Command::acyl:
      return acyl_cmd(spec);
    case Command::ambiguity:
      return ambiguity_cmd(spec);
    case Command::rate:
      return rate_cmd(spec);
  }
  throw Unsupported("unknown command");
}

int run(const ExperimentSpec& spec, std::ostream& out, std::ostream& diag) {
  Artifact artifact;
  try {
    artifact = execute(spec);
  } catch (const Error& e) {
    const int code = exit_for(e);
    emit_error(diag, e.kind(), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    emit_error(diag, "internal", e.what(), kExitFailure);
    return kExitFailure;
  }

  std::optional<std::string> dir = spec.out_dir;
  if (!dir) {
    if (const char* env = std::getenv("GROWTHLAB_OUT"); env && *env) dir = env;
  }
  if (dir) {
    std::error_code ec;
    std::filesystem::create_directories(*dir, ec);
    const auto path = std::filesystem::path(*dir) / artifact.filename;
    std::ofstream file(path, std::ios::binary);
    file << artifact.content;
    if (!file) {
      emit_error(diag, "io_error", "cannot write " + path.string(), kExitFailure);
      return kExitFailure;
    }
  } else {
    out << artifact.content;
  }
  if (artifact.exit_code == kExitBudget) emit_error(diag, "budget_exceeded", artifact.budget_message, kExitBudget);
  if (artifact.exit_code == kExitHypothesis) {
    emit_error(diag, "hypothesis_violation", std::string(to_string(spec.command)) + ": hypothesis violated on the range",
               kExitHypothesis);
  }
  return artifact.exit_code;
}

int run_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& diag) {
  ExperimentSpec spec;
  try {
    spec = parse_spec(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const ParseError& e) {
    emit_error(diag, e.kind(), e.message(), kExitParse, std::make_pair(e.line(), e.column()));
    return kExitParse;
  }
  return run(spec, out, diag);
}

}  // namespace growthlab::cli
