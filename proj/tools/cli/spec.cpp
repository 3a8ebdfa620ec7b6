#include "cli/spec.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

#include "cli/group_spec.hpp"
#include "growthlab/function_spec.hpp"
#include "growthlab/group.hpp"
#include "growthlab/subgroup.hpp"

namespace growthlab::cli {

namespace {

constexpr std::array<const char*, 7> kCommands = {"growth", "relgrowth", "distortion", "delta",
                                                  "acyl",   "ambiguity", "rate"};

constexpr std::size_t kMaxRadius = 512;
constexpr std::size_t kMaxAmbiguityRadius = 32;
constexpr std::size_t kMaxWorkers = 256;
constexpr std::size_t kMaxBudget = 10'000'000'000ULL;

struct Located {
  std::vector<Token> tokens;
  std::size_t end_line = 1;
  std::size_t end_column = 1;
};

[[noreturn]] void fail_at(const Token& t, const std::string& what) { throw ParseError(what, t.line, t.column); }

// The value token of `--flag` / `-f`, or the flag token for `--flag=value`.
const Token* flag_token(const Located& in, std::initializer_list<std::string_view> names, bool want_value) {
  for (std::size_t i = 0; i < in.tokens.size(); ++i) {
    const std::string& t = in.tokens[i].text;
    for (auto name : names) {
      if (t == name) return want_value && i + 1 < in.tokens.size() ? &in.tokens[i + 1] : &in.tokens[i];
      if (t.size() > name.size() && t.starts_with(name) && t[name.size()] == '=') return &in.tokens[i];
    }
  }
  return nullptr;
}

// Column inside a value token for an offset into its text.
Token shifted(const Token& t, std::size_t offset) {
  Token out = t;
  const bool equals_form = t.text.starts_with("-") && t.text.find('=') != std::string::npos;
  out.column += offset + (equals_form ? t.text.find('=') + 1 : 0);
  return out;
}

[[noreturn]] void fail_flag(const Located& in, std::initializer_list<std::string_view> names, const std::string& what,
                            std::size_t offset = 0) {
  if (const Token* t = flag_token(in, names, true)) fail_at(shifted(*t, offset), what);
  throw ParseError(what, in.end_line, in.end_column);
}

// Best guess at which token a CLI11 message is about: an option named in it,
// else the first non-trivial token it quotes.
Token locate_message(const Located& in, const std::string& message) {
  for (std::size_t i = 1; i < in.tokens.size(); ++i) {
    const auto& t = in.tokens[i].text;
    if (t.starts_with("-")) {
      const std::string name = t.substr(0, t.find('='));
      if (message.find(name) != std::string::npos) {
        const bool about_value = message.find("onvert") != std::string::npos ||
                                 message.find("not in") != std::string::npos ||
                                 message.find("alue") != std::string::npos;
        if (about_value && t.find('=') == std::string::npos && i + 1 < in.tokens.size()) return in.tokens[i + 1];
        return in.tokens[i];
      }
    }
  }
  for (std::size_t i = 1; i < in.tokens.size(); ++i) {
    if (in.tokens[i].text.size() > 1 && message.find(in.tokens[i].text) != std::string::npos) return in.tokens[i];
  }
  return Token{"", in.end_line, in.end_column};
}

void add_common(CLI::App* app, ExperimentSpec& s, std::string& format) {
  app->add_option("--group", s.group, "group: free:<rank> | product(<spec>,...)");
  app->add_option("--budget-elements", s.budget_elements, "element budget for enumerations");
  app->add_option("--workers", s.workers, "worker threads");
  app->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--out", s.out_dir, "output directory (default $GROWTHLAB_OUT, else stdout)");
}

void add_method(CLI::App* app, ExperimentSpec& s) {
  app->add_option("--method", s.method, "bfs | count")
      ->transform(CLI::CheckedTransformer(std::map<std::string, GrowthMethod>{{"bfs", GrowthMethod::bfs},
                                                                              {"count", GrowthMethod::count}}));
}

std::string quote(const std::string& v) {
  const bool plain = !v.empty() && std::all_of(v.begin(), v.end(), [](unsigned char c) {
    return std::isalnum(c) || c == ':' || c == '.' || c == '_' || c == '/' || c == '-' || c == '+';
  });
  return plain ? v : "'" + v + "'";
}

std::string number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Splits at top-level commas (outside parentheses).
std::vector<std::pair<std::string, std::size_t>> split_top(const std::string& text) {
  std::vector<std::pair<std::string, std::size_t>> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || (text[i] == ',' && depth == 0)) {
      out.emplace_back(text.substr(start, i - start), start);
      start = i + 1;
    } else if (text[i] == '(') {
      ++depth;
    } else if (text[i] == ')') {
      --depth;
    }
  }
  return out;
}

ExperimentSpec parse_located(const Located& in) {
  if (in.tokens.empty()) throw ParseError("missing command", 1, 1);
  const Token& head = in.tokens.front();
  if (head.text == "--help" || head.text == "-h") throw HelpRequested(usage());
  if (std::find(kCommands.begin(), kCommands.end(), head.text) == kCommands.end()) {
    fail_at(head, "unknown subcommand `" + head.text + "`");
  }

  ExperimentSpec s;
  std::string format;
  CLI::App app{"growthlab"};
  app.require_subcommand(1, 1);
  app.set_help_flag("--help", "print the flags of this command");

  auto* growth = app.add_subcommand("growth", "growth table of the whole group");
  add_common(growth, s, format);
  growth->add_option("--max-radius", s.max_radius);
  add_method(growth, s);

  auto* rel = app.add_subcommand("relgrowth", "relative growth table of a subgroup");
  add_common(rel, s, format);
  rel->add_option("--subgroup", s.subgroup)->required();
  rel->add_option("--max-radius", s.max_radius);
  add_method(rel, s);

  auto* dist = app.add_subcommand("distortion", "distortion function of a subgroup");
  add_common(dist, s, format);
  dist->add_option("--subgroup", s.subgroup)->required();
  dist->add_option("--generators", s.generators, "intrinsic generators Y");
  dist->add_option("--max-radius", s.max_radius);

  auto* delta = app.add_subcommand("delta", "four-point hyperbolicity constant");
  add_common(delta, s, format);
  delta->add_option("--subgroup", s.subgroup);
  delta->add_option("--max-radius", s.max_radius, "ball radius");
  delta->add_option("--matrix", s.matrix, "CSV distance matrix instead of a ball");
  delta->add_flag("--random", s.random, "sample tuples instead of scanning all");
  delta->add_option("--trials", s.trials);
  delta->add_option("--seed", s.seed);
  delta->add_option("--max-tuples", s.max_tuples);

  auto* acyl = app.add_subcommand("acyl", "acylindricity witnesses");
  add_common(acyl, s, format);
  acyl->add_option("--x", s.x);
  acyl->add_option("--y", s.y);
  acyl->add_option("--eps", s.eps);

  auto* amb = app.add_subcommand("ambiguity", "fiber sizes of the concatenation map");
  add_common(amb, s, format);
  amb->add_option("--subgroup", s.subgroup);
  amb->add_option("--connector-power,-n", s.connector_power);
  amb->add_option("--smax", s.smax);
  amb->add_option("--tmax", s.tmax);
  amb->add_option("--fit-tmax", s.fit_tmax);
  amb->add_option("--g", s.g);
  amb->add_option("--h", s.h);
  amb->add_flag("--naive", s.naive, "single connector 1");
  amb->add_option("--pieces", s.pieces, "explicit connector pieces");

  auto* rate = app.add_subcommand("rate", "bracket the exponential growth rate");
  add_common(rate, s, format);
  rate->add_option("--subgroup", s.subgroup);
  rate->add_option("--max-radius", s.max_radius);
  add_method(rate, s);
  rate->add_option("--input", s.input, "growth CSV artifact");
  rate->add_option("--epsilon", s.epsilon);
  rate->add_option("--shift", s.shift);
  rate->add_option("--threshold", s.threshold);
  rate->add_option("--bound", s.bound);

  std::vector<std::string> args;
  for (auto it = in.tokens.rbegin(); it != in.tokens.rend(); ++it) args.push_back(it->text);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.get_subcommand(head.text)->help());
  } catch (const CLI::ParseError& e) {
    std::string message = e.what();
    if (dynamic_cast<const CLI::RequiredError*>(&e)) throw ParseError(message, in.end_line, in.end_column);
    fail_at(locate_message(in, message), message);
  }

  for (std::size_t i = 0; i < kCommands.size(); ++i) {
    if (head.text == kCommands[i]) s.command = static_cast<Command>(i);
  }
  if (!format.empty()) s.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;

  if (s.max_radius > kMaxRadius) fail_flag(in, {"--max-radius"}, "radius out of range (max " + std::to_string(kMaxRadius) + ")");
  if (s.budget_elements < 1 || s.budget_elements > kMaxBudget) fail_flag(in, {"--budget-elements"}, "budget out of range");
  if (s.workers < 1 || s.workers > kMaxWorkers) fail_flag(in, {"--workers"}, "worker count out of range (1..256)");
  if (s.smax > kMaxAmbiguityRadius) fail_flag(in, {"--smax"}, "radius out of range (max 32)");
  if (s.tmax > kMaxAmbiguityRadius) fail_flag(in, {"--tmax"}, "radius out of range (max 32)");
  if (s.fit_tmax && *s.fit_tmax > s.tmax) fail_flag(in, {"--fit-tmax"}, "fit range exceeds --tmax");
  if (s.connector_power < 1 || s.connector_power > 1000) {
    fail_flag(in, {"--connector-power", "-n"}, "connector power out of range (1..1000)");
  }
  if (s.eps > kMaxAmbiguityRadius) fail_flag(in, {"--eps"}, "eps out of range (max 32)");
  if (s.trials < 1) fail_flag(in, {"--trials"}, "trials out of range");

  GroupDescriptor group;
  try {
    auto parsed = parse_group_spec(s.group);
    group = parsed;
  } catch (const GroupSpecError& e) {
    fail_flag(in, {"--group"}, e.what(), e.offset());
  }
  s.group = group.to_string();

  if (s.subgroup) {
    try {
      s.subgroup = parse_subgroup(group, *s.subgroup).to_spec();
    } catch (const Error& e) {
      fail_flag(in, {"--subgroup"}, std::string("bad subgroup: ") + e.what());
    }
  }

  auto canonical_element = [&](std::string& text, std::initializer_list<std::string_view> names) {
    try {
      text = format_element(parse_element(group, text));
    } catch (const Error& e) {
      fail_flag(in, names, std::string("bad element: ") + e.what());
    }
  };
  auto canonical_list = [&](std::string& text, std::initializer_list<std::string_view> names) {
    std::string out;
    for (auto& [piece, offset] : split_top(text)) {
      std::string trimmed = piece;
      trimmed.erase(0, trimmed.find_first_not_of(' '));
      trimmed.erase(trimmed.find_last_not_of(' ') + 1);
      try {
        if (!out.empty()) out += ',';
        out += format_element(parse_element(group, trimmed));
      } catch (const Error& e) {
        fail_flag(in, names, std::string("bad element: ") + e.what(), offset);
      }
    }
    text = out;
  };

  switch (s.command) {
    case Command::acyl:
      canonical_element(s.x, {"--x"});
      canonical_element(s.y, {"--y"});
      break;
    case Command::ambiguity:
      if (!s.naive && !s.pieces) {
        canonical_element(s.g, {"--g"});
        canonical_element(s.h, {"--h"});
      }
      if (s.pieces) canonical_list(*s.pieces, {"--pieces"});
      if (s.naive && s.pieces) fail_flag(in, {"--pieces"}, "--naive and --pieces are exclusive");
      break;
    case Command::distortion:
      if (s.generators) canonical_list(*s.generators, {"--generators"});
      break;
    case Command::rate:
      try {
        s.epsilon = FunctionSpec::parse(s.epsilon).to_string();
      } catch (const Error& e) {
        fail_flag(in, {"--epsilon"}, e.what());
      }
      try {
        s.shift = FunctionSpec::parse(s.shift).to_string();
      } catch (const Error& e) {
        fail_flag(in, {"--shift"}, e.what());
      }
      if (s.bound && !(*s.bound >= 0)) fail_flag(in, {"--bound"}, "bound must be nonnegative");
      break;
    default:
      break;
  }
  return s;
}

std::string render_impl(const ExperimentSpec& s, bool with_plumbing) {
  std::string out = to_string(s.command);
  auto flag = [&out](std::string_view name, const std::string& value) {
    out += ' ';
    out += name;
    out += ' ';
    out += quote(value);
  };
  auto method = [&] { flag("--method", s.method == GrowthMethod::bfs ? "bfs" : "count"); };

  flag("--group", s.group);
  switch (s.command) {
    case Command::growth:
      flag("--max-radius", std::to_string(s.max_radius));
      method();
      flag("--budget-elements", std::to_string(s.budget_elements));
      break;
    case Command::relgrowth:
      flag("--subgroup", *s.subgroup);
      flag("--max-radius", std::to_string(s.max_radius));
      method();
      flag("--budget-elements", std::to_string(s.budget_elements));
      break;
    case Command::distortion:
      flag("--subgroup", *s.subgroup);
      if (s.generators) flag("--generators", *s.generators);
      flag("--max-radius", std::to_string(s.max_radius));
      flag("--budget-elements", std::to_string(s.budget_elements));
      break;
    case Command::delta:
      if (s.matrix) {
        flag("--matrix", *s.matrix);
      } else {
        if (s.subgroup) flag("--subgroup", *s.subgroup);
        flag("--max-radius", std::to_string(s.max_radius));
        flag("--budget-elements", std::to_string(s.budget_elements));
      }
      if (s.random) {
        out += " --random";
        flag("--trials", std::to_string(s.trials));
        flag("--seed", std::to_string(s.seed));
      } else {
        flag("--max-tuples", std::to_string(s.max_tuples));
      }
      break;
    case Command::acyl:
      flag("--x", s.x);
      flag("--y", s.y);
      flag("--eps", std::to_string(s.eps));
      break;
    case Command::ambiguity:
      if (s.subgroup) flag("--subgroup", *s.subgroup);
      if (s.naive) {
        out += " --naive";
      } else if (s.pieces) {
        flag("--pieces", *s.pieces);
      } else {
        flag("--g", s.g);
        flag("--h", s.h);
        flag("--connector-power", std::to_string(s.connector_power));
      }
      flag("--smax", std::to_string(s.smax));
      flag("--tmax", std::to_string(s.tmax));
      flag("--fit-tmax", std::to_string(s.fit_tmax.value_or(s.tmax / 2)));
      flag("--budget-elements", std::to_string(s.budget_elements));
      break;
    case Command::rate:
      if (s.input) {
        flag("--input", *s.input);
      } else {
        if (s.subgroup) flag("--subgroup", *s.subgroup);
        flag("--max-radius", std::to_string(s.max_radius));
        method();
        flag("--budget-elements", std::to_string(s.budget_elements));
      }
      flag("--epsilon", s.epsilon);
      flag("--shift", s.shift);
      flag("--threshold", std::to_string(s.threshold));
      if (s.bound) flag("--bound", number(*s.bound));
      break;
  }
  flag("--format", s.resolved_format() == OutputFormat::csv ? "csv" : "json");
  if (with_plumbing) {
    flag("--workers", std::to_string(s.workers));
    if (s.out_dir) flag("--out", *s.out_dir);
  }
  return out;
}

}  // namespace

std::string usage() {
  return "usage: growthlab <command> [flags]\n"
         "commands:\n"
         "  growth      growth table of the whole group\n"
         "  relgrowth   relative growth table of a subgroup\n"
         "  distortion  distortion function of a subgroup\n"
         "  delta       four-point hyperbolicity constant of a ball or a CSV metric\n"
         "  acyl        acylindricity witnesses for a pair of points\n"
         "  ambiguity   fiber sizes of the concatenation map\n"
         "  rate        bracket the exponential growth rate of a table\n"
         "run `growthlab <command> --help` for the flags of a command\n";
}

const char* to_string(Command c) { return kCommands.at(static_cast<std::size_t>(c)); }

OutputFormat ExperimentSpec::resolved_format() const {
  if (format) return *format;
  switch (command) {
    case Command::growth:
    case Command::relgrowth:
    case Command::distortion:
    case Command::ambiguity:
      return OutputFormat::csv;
    default:
      return OutputFormat::json;
  }
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, column = 1;
  std::size_t i = 0;
  auto advance = [&] {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    ++i;
  };
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      advance();
      continue;
    }
    Token tok{"", line, column};
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
      const char c = text[i];
      if (c == '\'' || c == '"') {
        const std::size_t open_line = line, open_column = column;
        advance();
        while (i < text.size() && text[i] != c) {
          tok.text += text[i];
          advance();
        }
        if (i == text.size()) throw ParseError("unterminated quote", open_line, open_column);
        advance();
      } else {
        tok.text += c;
        advance();
      }
    }
    out.push_back(std::move(tok));
  }
  return out;
}

ExperimentSpec parse_spec(std::string_view text) {
  Located in;
  in.tokens = tokenize(text);
  in.end_line = 1;
  in.end_column = 1;
  for (char c : text) {
    if (c == '\n') {
      ++in.end_line;
      in.end_column = 1;
    } else {
      ++in.end_column;
    }
  }
  return parse_located(in);
}

ExperimentSpec parse_spec(const std::vector<std::string>& args) {
  Located in;
  std::size_t column = 1;
  for (const auto& a : args) {
    in.tokens.push_back(Token{a, 1, column});
    column += a.size() + 1;
  }
  in.end_column = column > 1 ? column - 1 : 1;
  return parse_located(in);
}

std::string render(const ExperimentSpec& spec) { return render_impl(spec, true); }
std::string provenance(const ExperimentSpec& spec) { return render_impl(spec, false); }

}  // namespace growthlab::cli
