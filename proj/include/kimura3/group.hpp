#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kimura3 {

// Nucleotides as elements of the Klein group Z/2 x Z/2:
//   A = (0,0), C = (1,0), G = (0,1), T = (1,1).
// The numeric value doubles as the base-4 digit used by pattern ids.
enum class Nuc : std::uint8_t { A = 0, C = 1, G = 2, T = 3 };

inline constexpr std::array<Nuc, 4> kAlphabet = {Nuc::A, Nuc::C, Nuc::G,
                                                 Nuc::T};

// Componentwise sum mod 2. A is the identity; every element is its own
// inverse.
constexpr Nuc add(Nuc g, Nuc h) {
  return static_cast<Nuc>(static_cast<std::uint8_t>(g) ^
                          static_cast<std::uint8_t>(h));
}

// Character table value chi^g(h) = (-1)^{<g,h>}, symmetric in g and h:
//
//          A   C   G   T
//   chi^A  1   1   1   1
//   chi^C  1  -1   1  -1
//   chi^G  1   1  -1  -1
//   chi^T  1  -1  -1   1
constexpr int chi(Nuc g, Nuc h) {
  unsigned overlap = static_cast<unsigned>(g) & static_cast<unsigned>(h);
  return (std::popcount(overlap) & 1) ? -1 : 1;
}

constexpr char to_char(Nuc g) { return "ACGT"[static_cast<int>(g)]; }

inline Nuc nuc_from_char(char c) {
  switch (c) {
    case 'A': return Nuc::A;
    case 'C': return Nuc::C;
    case 'G': return Nuc::G;
    case 'T': return Nuc::T;
    default:
      throw std::invalid_argument(std::string("not a nucleotide: '") + c +
                                  "'");
  }
}

// Number of patterns of length n, i.e. 4^n.
constexpr std::uint64_t pattern_space_size(int n) {
  return std::uint64_t{1} << (2 * n);
}

// Group sum of all base-4 digits of a pattern id.
constexpr Nuc pattern_id_sum(std::uint64_t id) {
  std::uint64_t acc = 0;
  while (id != 0) {
    acc ^= id & 3u;
    id >>= 2;
  }
  return static_cast<Nuc>(acc);
}

constexpr Nuc pattern_id_digit(std::uint64_t id, int pos) {
  return static_cast<Nuc>((id >> (2 * pos)) & 3u);
}

// An n-tuple of group elements indexing one Fourier coordinate. Position 0
// is the least-significant base-4 digit of the id.
class Pattern {
 public:
  Pattern() = default;
  explicit Pattern(std::vector<Nuc> entries) : entries_(std::move(entries)) {}

  static Pattern from_id(int n, std::uint64_t id) {
    if (id >= pattern_space_size(n)) {
      throw std::out_of_range("pattern id " + std::to_string(id) +
                              " out of range for " + std::to_string(n) +
                              " leaves");
    }
    std::vector<Nuc> entries(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) entries[i] = pattern_id_digit(id, i);
    return Pattern(std::move(entries));
  }

  static Pattern parse(std::string_view s) {
    std::vector<Nuc> entries;
    entries.reserve(s.size());
    for (char c : s) entries.push_back(nuc_from_char(c));
    return Pattern(std::move(entries));
  }

  int size() const { return static_cast<int>(entries_.size()); }
  Nuc operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  const std::vector<Nuc>& entries() const { return entries_; }

  std::uint64_t id() const {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      r |= static_cast<std::uint64_t>(entries_[i]) << (2 * i);
    }
    return r;
  }

  // Group sum of all entries; patterns with sum A form the slice carrying
  // the model.
  Nuc sum() const {
    Nuc acc = Nuc::A;
    for (Nuc g : entries_) acc = add(acc, g);
    return acc;
  }

  std::string str() const {
    std::string s;
    s.reserve(entries_.size());
    for (Nuc g : entries_) s.push_back(to_char(g));
    return s;
  }

  friend bool operator==(const Pattern& a, const Pattern& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<Nuc> entries_;
};

inline std::string pattern_id_str(int n, std::uint64_t id) {
  std::string s(static_cast<std::size_t>(n), 'A');
  for (int i = 0; i < n; ++i) s[i] = to_char(pattern_id_digit(id, i));
  return s;
}

}  // namespace kimura3
