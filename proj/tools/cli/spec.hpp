#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "growthlab/error.hpp"

namespace growthlab::cli {

enum class Command { growth, relgrowth, distortion, delta, acyl, ambiguity, rate };
enum class OutputFormat { csv, json };
enum class GrowthMethod { bfs, count };

const char* to_string(Command c);

// One fully resolved experiment. Fields that a command does not use keep
// their defaults and are left out of the rendered form.
struct ExperimentSpec {
  Command command = Command::growth;
  std::string group = "free:2";
  std::optional<std::string> subgroup;

  std::size_t max_radius = 6;
  std::size_t budget_elements = 10'000'000;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  std::optional<OutputFormat> format;
  std::optional<std::string> out_dir;

  GrowthMethod method = GrowthMethod::bfs;  // growth, relgrowth, rate

  std::optional<std::string> generators;  // distortion: Y, defaults to the subgroup's

  // ambiguity
  long long connector_power = 2;
  std::size_t smax = 3;
  std::size_t tmax = 3;
  std::optional<std::size_t> fit_tmax;
  std::string g = "a";
  std::string h = "b";
  bool naive = false;
  std::optional<std::string> pieces;

  // delta
  std::optional<std::string> matrix;
  bool random = false;
  std::size_t trials = 1'000'000;
  std::size_t max_tuples = 200'000'000;

  // acyl
  std::string x = "1";
  std::string y = "aaaaa";
  std::size_t eps = 1;

  // rate
  std::optional<std::string> input;
  std::string epsilon = "const:1";
  std::string shift = "const:0";
  std::size_t threshold = 1;
  std::optional<double> bound;

  OutputFormat resolved_format() const;
};

// Parse failure with a 1-based position in the spec text. For argv input the
// line is 1 and the column counts characters of the space-joined arguments.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column),
        message_(what) {}
  const char* kind() const noexcept override { return "parse_error"; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

// Grammar: `<command> (--flag value | --switch)*`, tokens separated by
// whitespace, single or double quotes group a token. Group and subgroup
// strings are validated and canonicalized.
ExperimentSpec parse_spec(std::string_view text);
ExperimentSpec parse_spec(const std::vector<std::string>& args);

/// Canonical text: command, then every flag the command uses in a fixed order.
std::string render(const ExperimentSpec& spec);
/// render() without --workers and --out, which do not change results.
std::string provenance(const ExperimentSpec& spec);

// `--help` anywhere in the arguments; carries the formatted usage text.
class HelpRequested : public std::exception {
 public:
  explicit HelpRequested(std::string text) : text_(std::move(text)) {}
  const char* what() const noexcept override { return text_.c_str(); }

 private:
  std::string text_;
};

/// Usage text listing the subcommands.
std::string usage();

struct Token {
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Whitespace tokenizer with quote grouping; quote characters are dropped.
std::vector<Token> tokenize(std::string_view text);

}  // namespace growthlab::cli
