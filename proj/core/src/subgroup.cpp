#include "growthlab/subgroup.hpp"

#include <algorithm>
#include <cctype>

#include "growthlab/error.hpp"

namespace growthlab {

namespace {

constexpr std::size_t kDefaultEnumerationRadius = 6;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = trim(s.substr(1, s.size() - 2));
  return s;
}

// Splits on `sep` at parenthesis depth zero.
std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth < 0) throw MalformedInput("unbalanced parentheses in `" + std::string(s) + "`");
    if (s[i] == sep && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw MalformedInput("unbalanced parentheses in `" + std::string(s) + "`");
  out.push_back(trim(s.substr(start)));
  return out;
}

std::vector<Element> parse_generator_list(const GroupDescriptor& group, std::string_view text) {
  std::vector<Element> gens;
  for (auto piece : split_top(unquote(text), ',')) {
    if (piece.empty()) throw MalformedInput("empty generator in `" + std::string(text) + "`");
    gens.push_back(parse_element(group, piece));
  }
  return gens;
}

std::string join_elements(const std::vector<Element>& gens) {
  std::string out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (i) out += ',';
    out += format_element(gens[i]);
  }
  return out;
}

// Exponent of g in <c> for one free factor, c nontrivial.
std::optional<long long> word_exponent(const Word& c, const Word& g) {
  if (g.empty()) return 0;
  const std::size_t n = c.length();
  std::size_t t = 0;  // length of the conjugating prefix p in c = p r p^-1
  while (t + 1 < n - t && c[t] == -c[n - 1 - t]) ++t;
  const std::size_t core = n - 2 * t;
  const std::size_t m = g.length();
  if (m < 2 * t + 1) return std::nullopt;
  for (std::size_t i = 0; i < t; ++i) {
    if (g[i] != c[i] || g[m - 1 - i] != c[n - 1 - i]) return std::nullopt;
  }
  const std::size_t middle = m - 2 * t;
  if (middle % core != 0) return std::nullopt;
  const auto q = static_cast<long long>(middle / core);
  bool forward = true, backward = true;
  for (std::size_t i = 0; i < middle && (forward || backward); ++i) {
    const LetterCode x = g[t + i];
    forward = forward && x == c[t + i % core];
    backward = backward && x == -c[t + core - 1 - i % core];
  }
  if (forward) return q;
  if (backward) return -q;
  return std::nullopt;
}

Word apply_images(const std::vector<Word>& images, const Word& w) {
  Word out;
  for (std::size_t i = 0; i < w.length(); ++i) {
    const Word& img = images[static_cast<std::size_t>(letter_of(w[i]))];
    out = out * (w[i] > 0 ? img : img.inverse());
  }
  return out;
}

GroupDescriptor factor_group(const GroupDescriptor& group, std::size_t f) { return GroupDescriptor::free(group.rank(f)); }

Membership meet(Membership a, Membership b) {
  if (a == Membership::no || b == Membership::no) return Membership::no;
  if (a == Membership::unknown || b == Membership::unknown) return Membership::unknown;
  return Membership::yes;
}

}  // namespace

const char* to_string(Membership m) {
  switch (m) {
    case Membership::no: return "false";
    case Membership::yes: return "true";
    case Membership::unknown: return "unknown";
  }
  return "unknown";
}

std::optional<long long> cyclic_exponent(const Element& c, const Element& g) {
  if (c.factor_count() != g.factor_count()) throw DescriptorMismatch("cyclic_exponent: factor count mismatch");
  std::optional<long long> k;
  for (std::size_t f = 0; f < c.factor_count(); ++f) {
    if (c.component(f).empty()) {
      if (!g.component(f).empty()) return std::nullopt;
      continue;
    }
    auto e = word_exponent(c.component(f), g.component(f));
    if (!e || (k && *k != *e)) return std::nullopt;
    k = e;
  }
  if (!k) return g.is_identity() ? std::optional<long long>(0) : std::nullopt;
  return k;
}

// ---------------------------------------------------------------------------

SubgroupOracle SubgroupOracle::whole(const GroupDescriptor& group) {
  std::vector<Element> gens;
  for (const auto& x : group.generators()) {
    if (x.sign > 0) gens.push_back(group.generator(x));
  }
  return SubgroupOracle(group, Whole{}, std::move(gens));
}

SubgroupOracle SubgroupOracle::stallings(const GroupDescriptor& group, const std::vector<Element>& generators) {
  if (group.factor_count() != 1) {
    throw Unsupported("stallings oracle needs a single free factor; got " + group.to_string());
  }
  std::vector<Word> words;
  for (const auto& g : generators) {
    group.validate(g);
    words.push_back(g.component(0));
  }
  return SubgroupOracle(group, Stallings{StallingsGraph::build(words, group.rank(0))}, generators);
}

SubgroupOracle SubgroupOracle::cyclic(const GroupDescriptor& group, const Element& generator) {
  group.validate(generator);
  return SubgroupOracle(group, Cyclic{generator}, {generator});
}

SubgroupOracle SubgroupOracle::product(const GroupDescriptor& group, std::vector<OraclePtr> parts) {
  if (parts.size() != group.factor_count()) {
    throw DescriptorMismatch("product oracle needs one part per factor of " + group.to_string());
  }
  std::vector<Element> gens;
  for (std::size_t f = 0; f < parts.size(); ++f) {
    if (!parts[f] || parts[f]->group() != factor_group(group, f)) {
      throw DescriptorMismatch("product oracle part " + std::to_string(f) + " is not over free:" +
                               std::to_string(group.rank(f)));
    }
    for (const auto& g : parts[f]->generators()) gens.push_back(embed(g, {f}, group));
  }
  return SubgroupOracle(group, Product{std::move(parts)}, std::move(gens));
}

SubgroupOracle SubgroupOracle::pullback(const GroupDescriptor& group, Pullback spec) {
  if (spec.source >= group.factor_count()) throw RangeError("pullback: source factor out of range");
  if (!spec.base) spec.base = std::make_shared<SubgroupOracle>(whole(factor_group(group, spec.source)));
  if (spec.base->group() != factor_group(group, spec.source)) {
    throw DescriptorMismatch("pullback: base oracle is not over the source factor");
  }
  std::vector<bool> constrained(group.factor_count(), false);
  constrained[spec.source] = true;
  for (const auto& c : spec.constraints) {
    if (c.target >= group.factor_count() || constrained[c.target]) {
      throw RangeError("pullback: constraint target out of range or repeated");
    }
    constrained[c.target] = true;
    if (c.images.size() != static_cast<std::size_t>(group.rank(spec.source))) {
      throw MalformedInput("pullback: need one image per source generator");
    }
    for (const auto& w : c.images) {
      for (std::size_t i = 0; i < w.length(); ++i) {
        if (letter_of(w[i]) >= group.rank(c.target)) throw DescriptorMismatch("pullback: image outside target factor");
      }
    }
  }
  std::vector<Element> gens;
  for (const auto& y : spec.base->generators()) {
    std::vector<Word> comps(group.factor_count());
    comps[spec.source] = y.component(0);
    for (const auto& c : spec.constraints) comps[c.target] = apply_images(c.images, y.component(0));
    gens.emplace_back(std::move(comps));
  }
  for (std::size_t f = 0; f < group.factor_count(); ++f) {
    if (constrained[f]) continue;
    for (int l = 0; l < group.rank(f); ++l) {
      gens.push_back(group.generator({static_cast<std::uint16_t>(f), static_cast<std::uint16_t>(l), 1}));
    }
  }
  return SubgroupOracle(group, std::move(spec), std::move(gens));
}

SubgroupOracle SubgroupOracle::diagonal(const GroupDescriptor& group) {
  if (group.factor_count() < 2) throw Unsupported("diagonal needs a product of at least two factors");
  const int k = group.rank(0);
  for (int r : group.ranks()) {
    if (r != k) throw Unsupported("diagonal needs factors of equal rank; got " + group.to_string());
  }
  std::vector<Word> identity_images;
  for (int l = 0; l < k; ++l) identity_images.push_back(Word::reduce(std::string(1, static_cast<char>(encode_letter(l, 1)))));
  Pullback spec;
  spec.source = 0;
  for (std::size_t f = 1; f < group.factor_count(); ++f) spec.constraints.push_back({f, identity_images});
  return pullback(group, std::move(spec));
}

SubgroupOracle SubgroupOracle::graph_of(const GroupDescriptor& group, std::vector<Word> images) {
  if (group.factor_count() != 2) throw Unsupported("hom subgroup needs exactly two factors");
  Pullback spec;
  spec.source = 0;
  spec.constraints.push_back({1, std::move(images)});
  return pullback(group, std::move(spec));
}

SubgroupOracle SubgroupOracle::budgeted(const GroupDescriptor& group, const std::vector<Element>& generators,
                                        std::size_t radius, std::size_t element_budget) {
  std::vector<Element> steps;
  for (const auto& g : generators) {
    group.validate(g);
    steps.push_back(g);
    steps.push_back(invert(g));
  }
  auto members = std::make_shared<std::unordered_set<Element, ElementHash>>();
  members->insert(group.identity());
  std::vector<Element> frontier{group.identity()};
  for (std::size_t depth = 1; depth <= radius && !frontier.empty(); ++depth) {
    std::vector<Element> next;
    for (const auto& h : frontier) {
      for (const auto& s : steps) {
        Element p = multiply(h, s);
        if (members->insert(p).second) next.push_back(std::move(p));
      }
    }
    if (members->size() > element_budget) {
      throw BudgetExceeded("budgeted enumeration exceeded " + std::to_string(element_budget) + " elements", depth - 1);
    }
    frontier.swap(next);
  }
  return SubgroupOracle(group, BudgetedEnumeration{radius, std::move(members)}, generators);
}

Membership SubgroupOracle::contains(const Element& g) const {
  group_.validate(g);
  return std::visit(
      [&](const auto& v) -> Membership {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Whole>) {
          return Membership::yes;
        } else if constexpr (std::is_same_v<T, Stallings>) {
          return v.graph.accepts(g.component(0)) ? Membership::yes : Membership::no;
        } else if constexpr (std::is_same_v<T, Cyclic>) {
          return cyclic_exponent(v.generator, g) ? Membership::yes : Membership::no;
        } else if constexpr (std::is_same_v<T, Product>) {
          Membership m = Membership::yes;
          for (std::size_t f = 0; f < v.parts.size() && m != Membership::no; ++f) {
            m = meet(m, v.parts[f]->contains(Element({g.component(f)})));
          }
          return m;
        } else if constexpr (std::is_same_v<T, Pullback>) {
          const Word& src = g.component(v.source);
          for (const auto& c : v.constraints) {
            if (apply_images(c.images, src) != g.component(c.target)) return Membership::no;
          }
          return v.base->contains(Element({src}));
        } else {
          return v.members->count(g) ? Membership::yes : Membership::unknown;
        }
      },
      variant_);
}

std::string SubgroupOracle::to_spec() const {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Whole>) {
          return "all";
        } else if constexpr (std::is_same_v<T, Stallings>) {
          return "\"" + join_elements(generators_) + "\"";
        } else if constexpr (std::is_same_v<T, Cyclic>) {
          return "cyclic:\"" + format_element(v.generator) + "\"";
        } else if constexpr (std::is_same_v<T, Product>) {
          std::string out = "prod(";
          for (std::size_t f = 0; f < v.parts.size(); ++f) {
            if (f) out += "; ";
            out += v.parts[f]->to_spec();
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, Pullback>) {
          const bool base_whole = std::holds_alternative<Whole>(v.base->variant());
          bool is_diag = base_whole && v.source == 0 && v.constraints.size() + 1 == group_.factor_count();
          for (const auto& c : v.constraints) {
            for (std::size_t l = 0; l < c.images.size() && is_diag; ++l) {
              is_diag = c.images[l].length() == 1 && c.images[l][0] == encode_letter(static_cast<int>(l), 1);
            }
          }
          if (is_diag) return "diag";
          if (base_whole && v.source == 0 && v.constraints.size() == 1 && v.constraints[0].target == 1) {
            std::string out = "hom:\"";
            for (std::size_t l = 0; l < v.constraints[0].images.size(); ++l) {
              if (l) out += ',';
              out += format_word(v.constraints[0].images[l]);
            }
            return out + "\"";
          }
          return "pullback";
        } else {
          return "enum(" + std::to_string(v.radius) + "):\"" + join_elements(generators_) + "\"";
        }
      },
      variant_);
}

// ---------------------------------------------------------------------------

Element project(const Element& g, const std::vector<std::size_t>& factors) {
  if (factors.empty()) throw RangeError("project: empty factor set");
  std::vector<Word> comps;
  comps.reserve(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i] >= g.factor_count()) throw RangeError("project: factor index out of range");
    if (i && factors[i] <= factors[i - 1]) throw RangeError("project: factor set must be ascending and distinct");
    comps.push_back(g.component(factors[i]));
  }
  return Element(std::move(comps));
}

Element embed(const Element& g, const std::vector<std::size_t>& factors, const GroupDescriptor& target) {
  if (factors.size() != g.factor_count()) throw DescriptorMismatch("embed: factor set size differs from arity");
  std::vector<Word> comps(target.factor_count());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i] >= target.factor_count()) throw RangeError("embed: factor index out of range");
    if (i && factors[i] <= factors[i - 1]) throw RangeError("embed: factor set must be ascending and distinct");
    comps[factors[i]] = g.component(i);
  }
  Element out(std::move(comps));
  target.validate(out);
  return out;
}

SubgroupOracle parse_subgroup(const GroupDescriptor& group, std::string_view text) {
  text = trim(text);
  if (text.empty()) throw MalformedInput("empty subgroup spec");
  if (text == "all") return SubgroupOracle::whole(group);
  if (text == "diag") return SubgroupOracle::diagonal(group);
  if (text.starts_with("cyclic:")) {
    return SubgroupOracle::cyclic(group, parse_element(group, unquote(text.substr(7))));
  }
  if (text.starts_with("hom:")) {
    if (group.factor_count() != 2) throw Unsupported("hom subgroup needs exactly two factors");
    std::vector<Word> images;
    for (auto piece : split_top(unquote(text.substr(4)), ',')) images.push_back(parse_word(piece, group.rank(1)));
    return SubgroupOracle::graph_of(group, std::move(images));
  }
  if (text.starts_with("enum(")) {
    const auto close = text.find(')');
    if (close == std::string_view::npos || close + 1 >= text.size() || text[close + 1] != ':') {
      throw MalformedInput("expected enum(R):\"generators\"");
    }
    std::size_t radius = 0;
    try {
      radius = std::stoul(std::string(text.substr(5, close - 5)));
    } catch (const std::exception&) {
      throw MalformedInput("enum radius must be a natural number");
    }
    return SubgroupOracle::budgeted(group, parse_generator_list(group, text.substr(close + 2)), radius);
  }
  if (text.starts_with("prod(")) {
    if (text.back() != ')') throw MalformedInput("unbalanced parentheses in `" + std::string(text) + "`");
    auto pieces = split_top(text.substr(5, text.size() - 6), ';');
    if (pieces.size() != group.factor_count()) {
      throw DescriptorMismatch("prod(...) needs one subgroup spec per factor of " + group.to_string());
    }
    std::vector<OraclePtr> parts;
    for (std::size_t f = 0; f < pieces.size(); ++f) {
      parts.push_back(std::make_shared<SubgroupOracle>(parse_subgroup(factor_group(group, f), pieces[f])));
    }
    return SubgroupOracle::product(group, std::move(parts));
  }
  auto gens = parse_generator_list(group, text);
  if (group.factor_count() == 1) return SubgroupOracle::stallings(group, gens);
  return SubgroupOracle::budgeted(group, gens, kDefaultEnumerationRadius);
}

}  // namespace growthlab
