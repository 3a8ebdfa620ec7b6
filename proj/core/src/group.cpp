#include "growthlab/group.hpp"

#include <algorithm>
#include <cctype>

#include "growthlab/error.hpp"

namespace growthlab {

Word Word::reduce(std::string_view codes) {
  std::string stack;
  stack.reserve(codes.size());
  for (char c : codes) {
    if (!stack.empty() && stack.back() == static_cast<char>(-c)) {
      stack.pop_back();
    } else {
      stack.push_back(c);
    }
  }
  return Word(std::move(stack));
}

Word Word::inverse() const {
  std::string out(codes_.rbegin(), codes_.rend());
  for (char& c : out) c = static_cast<char>(-c);
  return Word(std::move(out));
}

Word operator*(const Word& lhs, const Word& rhs) {
  const std::string& a = lhs.codes_;
  const std::string& b = rhs.codes_;
  std::size_t k = 0;
  const std::size_t limit = std::min(a.size(), b.size());
  while (k < limit && a[a.size() - 1 - k] == static_cast<char>(-b[k])) ++k;
  std::string out;
  out.reserve(a.size() + b.size() - 2 * k);
  out.append(a, 0, a.size() - k);
  out.append(b, k, std::string::npos);
  return Word(std::move(out));
}

Word Word::times(LetterCode code) const {
  if (!codes_.empty() && codes_.back() == static_cast<char>(-code)) {
    return Word(codes_.substr(0, codes_.size() - 1));
  }
  std::string out;
  out.reserve(codes_.size() + 1);
  out = codes_;
  out.push_back(static_cast<char>(code));
  return Word(std::move(out));
}

Word reduce(std::span<const GeneratorIndex> raw) {
  std::string codes;
  codes.reserve(raw.size());
  for (const auto& x : raw) {
    if (x.factor != raw.front().factor) {
      throw MalformedInput("reduce: letters from different factors in one word");
    }
    if (x.sign != 1 && x.sign != -1) throw MalformedInput("reduce: letter sign must be +1 or -1");
    if (x.letter >= kMaxRank) throw MalformedInput("reduce: generator index out of range");
    codes.push_back(static_cast<char>(encode_letter(x.letter, x.sign)));
  }
  return Word::reduce(codes);
}

// ---------------------------------------------------------------------------

GroupDescriptor::GroupDescriptor(std::vector<int> ranks) : ranks_(std::move(ranks)) {
  if (ranks_.empty()) throw MalformedInput("group needs at least one factor");
  for (int k : ranks_) {
    if (k < 1 || k > kMaxRank) throw MalformedInput("free factor rank must lie in [1, 126]");
  }
}

std::size_t GroupDescriptor::generator_count() const {
  std::size_t n = 0;
  for (int k : ranks_) n += 2 * static_cast<std::size_t>(k);
  return n;
}

std::vector<GeneratorIndex> GroupDescriptor::generators() const {
  std::vector<GeneratorIndex> out;
  out.reserve(generator_count());
  for (std::size_t f = 0; f < ranks_.size(); ++f) {
    for (int i = 0; i < ranks_[f]; ++i) {
      out.push_back({static_cast<std::uint16_t>(f), static_cast<std::uint16_t>(i), 1});
      out.push_back({static_cast<std::uint16_t>(f), static_cast<std::uint16_t>(i), -1});
    }
  }
  return out;
}

Element GroupDescriptor::identity() const { return Element::identity(ranks_.size()); }

Element GroupDescriptor::generator(const GeneratorIndex& x) const {
  if (x.factor >= ranks_.size() || x.letter >= ranks_[x.factor]) {
    throw DescriptorMismatch("generator outside of " + to_string());
  }
  return identity().times(x);
}

void GroupDescriptor::validate(const Element& g) const {
  if (g.factor_count() != ranks_.size()) {
    throw DescriptorMismatch("element " + format_element(g) + " has " + std::to_string(g.factor_count()) +
                             " components, group " + to_string() + " has " + std::to_string(ranks_.size()));
  }
  for (std::size_t f = 0; f < ranks_.size(); ++f) {
    for (char c : g.component(f).codes()) {
      if (letter_of(static_cast<LetterCode>(c)) >= ranks_[f]) {
        throw DescriptorMismatch("element " + format_element(g) + " uses a generator outside of " + to_string());
      }
    }
  }
}

std::string GroupDescriptor::to_string() const {
  if (ranks_.size() == 1) return "free:" + std::to_string(ranks_[0]);
  std::string out = "product(";
  for (std::size_t f = 0; f < ranks_.size(); ++f) {
    if (f) out += ',';
    out += "free:" + std::to_string(ranks_[f]);
  }
  return out + ")";
}

// ---------------------------------------------------------------------------

bool Element::is_identity() const {
  return std::all_of(components_.begin(), components_.end(), [](const Word& w) { return w.empty(); });
}

std::size_t Element::length() const {
  std::size_t n = 0;
  for (const auto& w : components_) n += w.length();
  return n;
}

Element Element::times(const GeneratorIndex& x) const {
  Element out(*this);
  out.components_[x.factor] = components_[x.factor].times(encode_letter(x.letter, x.sign));
  return out;
}

std::size_t Element::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& w : components_) {
    h ^= std::hash<std::string>{}(w.codes()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

namespace {

void require_same_shape(const Element& u, const Element& v, const char* op) {
  if (u.factor_count() != v.factor_count()) {
    throw DescriptorMismatch(std::string(op) + ": elements from groups with different factor counts");
  }
}

}  // namespace

Element multiply(const Element& u, const Element& v) {
  require_same_shape(u, v, "multiply");
  std::vector<Word> out;
  out.reserve(u.factor_count());
  for (std::size_t f = 0; f < u.factor_count(); ++f) out.push_back(u.component(f) * v.component(f));
  return Element(std::move(out));
}

Element invert(const Element& u) {
  std::vector<Word> out;
  out.reserve(u.factor_count());
  for (const auto& w : u.components()) out.push_back(w.inverse());
  return Element(std::move(out));
}

Element power(const Element& g, long long n) {
  Element base = n < 0 ? invert(g) : g;
  unsigned long long e = n < 0 ? static_cast<unsigned long long>(-(n + 1)) + 1 : static_cast<unsigned long long>(n);
  Element result = Element::identity(g.factor_count());
  while (e > 0) {
    if (e & 1U) result = multiply(result, base);
    e >>= 1U;
    if (e) base = multiply(base, base);
  }
  return result;
}

std::size_t word_length(const Element& u) { return u.length(); }

std::size_t distance(const Element& u, const Element& v) {
  require_same_shape(u, v, "distance");
  // |u^{-1} v| per factor is |a| + |b| - 2 * (common prefix of a and b).
  std::size_t d = 0;
  for (std::size_t f = 0; f < u.factor_count(); ++f) {
    const std::string& a = u.component(f).codes();
    const std::string& b = v.component(f).codes();
    auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
    const auto common = static_cast<std::size_t>(ia - a.begin());
    d += a.size() + b.size() - 2 * common;
  }
  return d;
}

std::strong_ordering shortlex_compare(const Element& u, const Element& v) {
  require_same_shape(u, v, "shortlex_compare");
  if (auto c = u.length() <=> v.length(); c != 0) return c;
  // Walk both flattened letter sequences in parallel. A letter of a lower
  // factor precedes any letter of a higher factor.
  std::size_t fu = 0, iu = 0, fv = 0, iv = 0;
  auto advance = [](const Element& g, std::size_t& f, std::size_t& i) {
    while (f < g.factor_count() && i >= g.component(f).length()) {
      ++f;
      i = 0;
    }
  };
  for (;;) {
    advance(u, fu, iu);
    advance(v, fv, iv);
    if (fu == u.factor_count() || fv == v.factor_count()) return std::strong_ordering::equal;
    if (fu != fv) return fu <=> fv;
    const int ru = letter_rank(u.component(fu)[iu]);
    const int rv = letter_rank(v.component(fv)[iv]);
    if (ru != rv) return ru <=> rv;
    ++iu;
    ++iv;
  }
}

// ---------------------------------------------------------------------------

Word parse_word(std::string_view text, int rank) {
  if (text == "1") return Word{};
  if (text.empty()) throw MalformedInput("empty word text; write the identity as `1`");
  std::string codes;
  codes.reserve(text.size());
  for (char c : text) {
    const unsigned char uc = static_cast<unsigned char>(c);
    if (!std::isalpha(uc)) {
      throw MalformedInput(std::string("unexpected character '") + c + "' in word `" + std::string(text) + "`");
    }
    const int letter = std::tolower(uc) - 'a';
    if (letter >= rank) {
      throw MalformedInput(std::string("generator '") + c + "' exceeds factor rank " + std::to_string(rank));
    }
    codes.push_back(static_cast<char>(encode_letter(letter, std::islower(uc) ? 1 : -1)));
  }
  return Word::reduce(codes);
}

Element parse_element(const GroupDescriptor& group, std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text == "1") return group.identity();
  if (!text.empty() && text.front() == '(') {
    if (text.back() != ')') throw MalformedInput("unbalanced parentheses in `" + std::string(text) + "`");
    std::string_view body = text.substr(1, text.size() - 2);
    std::vector<Word> parts;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = body.find(',', start);
      const std::string_view piece = trim(body.substr(start, comma == std::string_view::npos ? comma : comma - start));
      if (parts.size() >= group.factor_count()) {
        throw DescriptorMismatch("too many components in `" + std::string(text) + "` for " + group.to_string());
      }
      parts.push_back(parse_word(piece, group.rank(parts.size())));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (parts.size() != group.factor_count()) {
      throw DescriptorMismatch("expected " + std::to_string(group.factor_count()) + " components in `" +
                               std::string(text) + "`");
    }
    return Element(std::move(parts));
  }
  if (group.factor_count() != 1) {
    throw DescriptorMismatch("product elements must be written as (w1,...,wm): `" + std::string(text) + "`");
  }
  return Element({parse_word(text, group.rank(0))});
}

std::string format_word(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  out.reserve(w.length());
  for (std::size_t i = 0; i < w.length(); ++i) {
    const LetterCode c = w[i];
    const int letter = letter_of(c);
    if (letter < 26) {
      out.push_back(static_cast<char>((c > 0 ? 'a' : 'A') + letter));
    } else {
      out += (c > 0 ? "x" : "X") + std::to_string(letter + 1);
    }
  }
  return out;
}

std::string format_element(const Element& g) {
  if (g.factor_count() == 1) return format_word(g.component(0));
  std::string out = "(";
  for (std::size_t f = 0; f < g.factor_count(); ++f) {
    if (f) out += ',';
    out += format_word(g.component(f));
  }
  return out + ")";
}

}  // namespace growthlab
