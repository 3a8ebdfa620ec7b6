#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace growthlab {

// One letter of the standard symmetric generating set of a product of free
// groups: generator `letter` of direct factor `factor`, or its inverse.
struct GeneratorIndex {
  std::uint16_t factor = 0;
  std::uint16_t letter = 0;
  std::int8_t sign = 1;

  GeneratorIndex inverse() const { return {factor, letter, static_cast<std::int8_t>(-sign)}; }
  friend bool operator==(const GeneratorIndex&, const GeneratorIndex&) = default;
};

// Within a single factor a letter is stored as a signed byte: +(letter+1) for
// the generator and -(letter+1) for its inverse.
using LetterCode = signed char;

constexpr int kMaxRank = 126;

constexpr LetterCode encode_letter(int letter, int sign) {
  return static_cast<LetterCode>(sign > 0 ? letter + 1 : -(letter + 1));
}
constexpr int letter_of(LetterCode code) { return (code > 0 ? code : -code) - 1; }
constexpr int sign_of(LetterCode code) { return code > 0 ? 1 : -1; }

// Position of a letter in the fixed shortlex letter order inside one factor:
// generator index ascending, positive before negative.
constexpr int letter_rank(LetterCode code) { return 2 * letter_of(code) + (code < 0 ? 1 : 0); }

// A freely reduced word over the generators of one free factor.
class Word {
 public:
  Word() = default;

  /// Freely reduces `codes` with a single left-to-right stack pass.
  static Word reduce(std::string_view codes);

  std::size_t length() const { return codes_.size(); }
  bool empty() const { return codes_.empty(); }
  LetterCode operator[](std::size_t i) const { return static_cast<LetterCode>(codes_[i]); }
  const std::string& codes() const { return codes_; }

  Word inverse() const;
  /// Reduced product; cancellation happens only at the junction.
  friend Word operator*(const Word& lhs, const Word& rhs);

  /// Right multiplication by one letter.
  Word times(LetterCode code) const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  explicit Word(std::string codes) : codes_(std::move(codes)) {}
  std::string codes_;
};

/// Reduces a sequence of generator letters that all lie in one factor.
/// Throws MalformedInput on mixed factor indices.
Word reduce(std::span<const GeneratorIndex> raw);

class Element;

// A free group F_k, or a finite direct product F_{k_1} x ... x F_{k_m}, with its
// standard symmetric generating set.
class GroupDescriptor {
 public:
  GroupDescriptor() = default;
  explicit GroupDescriptor(std::vector<int> ranks);

  static GroupDescriptor free(int rank) { return GroupDescriptor({rank}); }
  static GroupDescriptor product(std::initializer_list<int> ranks) { return GroupDescriptor(std::vector<int>(ranks)); }

  std::size_t factor_count() const { return ranks_.size(); }
  int rank(std::size_t factor) const { return ranks_.at(factor); }
  const std::vector<int>& ranks() const { return ranks_; }

  /// Size of the symmetric generating set, sum of 2 k_i.
  std::size_t generator_count() const;
  /// All generating letters in shortlex letter order.
  std::vector<GeneratorIndex> generators() const;

  Element identity() const;
  Element generator(const GeneratorIndex& x) const;

  /// Throws DescriptorMismatch when `g` is not an element of this group.
  void validate(const Element& g) const;

  /// Canonical spec string: `free:2` or `product(free:2,free:1)`.
  std::string to_string() const;

  friend bool operator==(const GroupDescriptor&, const GroupDescriptor&) = default;

 private:
  std::vector<int> ranks_;
};

// A group element: one reduced word per direct factor, in factor order.
class Element {
 public:
  Element() = default;
  explicit Element(std::vector<Word> components) : components_(std::move(components)) {}

  static Element identity(std::size_t factors) { return Element(std::vector<Word>(factors)); }

  std::size_t factor_count() const { return components_.size(); }
  const Word& component(std::size_t i) const { return components_[i]; }
  const std::vector<Word>& components() const { return components_; }

  bool is_identity() const;
  /// Word length relative to the standard generating set: sum of component lengths.
  std::size_t length() const;

  /// Right multiplication by a single generator letter.
  Element times(const GeneratorIndex& x) const;

  std::size_t hash() const;

  friend bool operator==(const Element&, const Element&) = default;

 private:
  std::vector<Word> components_;
};

Element multiply(const Element& u, const Element& v);
Element invert(const Element& u);
Element power(const Element& g, long long n);
std::size_t word_length(const Element& u);
/// d(u, v) = |u^{-1} v|.
std::size_t distance(const Element& u, const Element& v);

/// Shortlex: word length first, then lexicographic on the flattened letter
/// sequence with letters ordered by (factor, generator, positive first).
std::strong_ordering shortlex_compare(const Element& u, const Element& v);

struct ShortlexLess {
  bool operator()(const Element& u, const Element& v) const { return shortlex_compare(u, v) < 0; }
};

struct ElementHash {
  std::size_t operator()(const Element& g) const { return g.hash(); }
};

// Text syntax: `a`..`z` are generators, upper case their inverses, `1` the
// empty word; product elements are written `(ab,B)`.
Word parse_word(std::string_view text, int rank);
Element parse_element(const GroupDescriptor& group, std::string_view text);
std::string format_word(const Word& w);
std::string format_element(const Element& g);

}  // namespace growthlab

template <>
struct std::hash<growthlab::Element> {
  std::size_t operator()(const growthlab::Element& g) const { return g.hash(); }
};
