#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kimura3/fourier.hpp"
#include "kimura3/group.hpp"
#include "kimura3/tree.hpp"

namespace kimura3 {

// Provenance of a generator within the recursive construction.
enum class GenTag {
  kBase3,         // one of the six 3-leaf quartics
  kLiftedCherry,  // image of a smaller tree's generator under the append-A map
  kLiftedClaw,    // image of a 3-leaf quartic through the reference-leaf claw
  kQuadricMinor,  // 2x2 minor of one of the four pairing matrices
  kHyperplane,    // q_{A..A} - 1
};

std::string tag_name(GenTag tag);
GenTag tag_from_name(const std::string& name);

// Product of Fourier coordinates, stored as sorted pattern ids (multiset).
struct Monomial {
  std::vector<std::uint32_t> ids;

  int degree() const { return static_cast<int>(ids.size()); }
  bool operator==(const Monomial&) const = default;
  bool operator<(const Monomial& o) const { return ids < o.ids; }
};

// Difference of two monomials of equal degree; the hyperplane element is
// q_{A..A} minus the empty product. Canonical orientation puts the
// lexicographically smaller side on plus, so equality tests are up to a
// global sign.
struct Binomial {
  Monomial plus;
  Monomial minus;
  GenTag tag = GenTag::kBase3;

  static Binomial make(Monomial a, Monomial b, GenTag tag);
  bool is_hyperplane() const { return tag == GenTag::kHyperplane; }
  bool operator==(const Binomial& o) const {
    return plus == o.plus && minus == o.minus;
  }
};

// Plus-product minus minus-product at the given Fourier vector; empty
// monomials evaluate to 1, so the hyperplane element gives q_{A..A} - 1.
double evaluate(const Binomial& b, const QVector& q);

// The local-complete-intersection generator set of one topology:
// c(n) = 4^(n-1) - 6n + 9 binomials, hyperplane element last.
struct InvariantSet {
  Tree tree;
  std::vector<Binomial> generators;

  int leaf_count() const { return tree.leaf_count(); }
  std::map<GenTag, int> counts_by_tag() const;
};

// Expected generator count for n leaves.
constexpr std::int64_t lci_size(int n) {
  return (std::int64_t{1} << (2 * (n - 1))) - 6 * n + 9;
}

// The six 3-leaf quartics in their published order, canonicalized, followed
// by the hyperplane element q_{AAA} - 1.
std::vector<Binomial> three_leaf_generators();

// The 3*(4^(n-3)-1) pairing-matrix minors for one letter z, in position
// coordinates with the cherry at the last two positions. For each z the
// matrix pairs column tuples (x_1..x_{n-2}) of sum z against row pairs
// (x, y) with x + y = z, and the minors are the ones through the
// (zA...A, zA) entry.
std::vector<Binomial> quadric_minors(int n, Nuc z);

// Generators for an arbitrary trivalent topology, patterns indexed by the
// tree's leaf_order positions (for label-sorted trees, position i is leaf
// i+1). Built recursively: lift the collapsed tree's set through append-A,
// lift the six base quartics through the reference-leaf claw, add the
// quadric minors and one hyperplane element.
InvariantSet lci(const Tree& t);

// Lossless structured-text (JSON) round trip of a generator set.
std::string serialize(const InvariantSet& set);
InvariantSet deserialize(const std::string& text);

}  // namespace kimura3
