#include "kimura3/invariants.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace kimura3 {

namespace {

// Patterns indexed by leaf_order position while the recursion rearranges
// leaves; converted to the caller's position space on the way out.
using PosPattern = std::vector<Nuc>;

struct PosBinomial {
  std::vector<PosPattern> plus;
  std::vector<PosPattern> minus;
  GenTag tag;
};

constexpr const char* kBaseQuartics[6][2][4] = {
    {{"AAA", "ATT", "TCG", "TGC"}, {"ACC", "AGG", "TAT", "TTA"}},
    {{"CCA", "CTG", "TAT", "TGC"}, {"CAC", "CGT", "TCG", "TTA"}},
    {{"AGG", "ATT", "CAC", "CCA"}, {"AAA", "ACC", "CGT", "CTG"}},
    {{"ACC", "ATT", "GAG", "GGA"}, {"AAA", "AGG", "GCT", "GTC"}},
    {{"CAC", "CTG", "GCT", "GGA"}, {"CCA", "CGT", "GAG", "GTC"}},
    {{"GGA", "GTC", "TAT", "TCG"}, {"GAG", "GCT", "TGC", "TTA"}},
};

PosPattern pos_pattern(const char* s) {
  PosPattern p;
  for (const char* c = s; *c != '\0'; ++c) p.push_back(nuc_from_char(*c));
  return p;
}

std::vector<PosBinomial> base_quartics_pos() {
  std::vector<PosBinomial> out;
  for (const auto& q : kBaseQuartics) {
    PosBinomial b;
    b.tag = GenTag::kBase3;
    for (const char* s : q[0]) b.plus.push_back(pos_pattern(s));
    for (const char* s : q[1]) b.minus.push_back(pos_pattern(s));
    out.push_back(std::move(b));
  }
  return out;
}

PosBinomial hyperplane_pos(int n) {
  PosBinomial b;
  b.tag = GenTag::kHyperplane;
  b.plus.push_back(PosPattern(static_cast<std::size_t>(n), Nuc::A));
  return b;
}

// Append A at the new last position (the collapsed leaf's state stays at
// position n-1, the far cherry leaf reads A).
PosPattern psi_append(const PosPattern& p) {
  PosPattern out = p;
  out.push_back(Nuc::A);
  return out;
}

// Place (x, y, z) at positions 1, n-1, n with A elsewhere.
PosPattern j3_embed(const PosPattern& xyz, int n) {
  PosPattern out(static_cast<std::size_t>(n), Nuc::A);
  out[0] = xyz[0];
  out[static_cast<std::size_t>(n - 2)] = xyz[1];
  out[static_cast<std::size_t>(n - 1)] = xyz[2];
  return out;
}

PosBinomial map_binomial(const PosBinomial& b, GenTag tag,
                         PosPattern (*f)(const PosPattern&, int), int n) {
  PosBinomial out;
  out.tag = tag;
  for (const auto& p : b.plus) out.plus.push_back(f(p, n));
  for (const auto& p : b.minus) out.minus.push_back(f(p, n));
  return out;
}

std::vector<PosBinomial> quadric_minors_pos(int n, Nuc z) {
  if (n < 4) throw std::invalid_argument("quadric minors need at least 4 leaves");
  const int head = n - 2;

  // The anchor coordinate q_{zA...AzA}: z at positions 1 and n-1.
  PosPattern anchor(static_cast<std::size_t>(n), Nuc::A);
  anchor[0] = z;
  anchor[static_cast<std::size_t>(n - 2)] = z;

  // Head tuples of sum z, skipping (z, A, ..., A).
  std::vector<PosPattern> cols;
  for (std::uint64_t id = 0; id < pattern_space_size(head); ++id) {
    if (pattern_id_sum(id) != z) continue;
    PosPattern col(static_cast<std::size_t>(head));
    for (int i = 0; i < head; ++i) col[static_cast<std::size_t>(i)] = pattern_id_digit(id, i);
    bool is_anchor_col = col[0] == z;
    for (int i = 1; i < head && is_anchor_col; ++i) is_anchor_col = col[static_cast<std::size_t>(i)] == Nuc::A;
    if (!is_anchor_col) cols.push_back(std::move(col));
  }

  std::vector<PosBinomial> out;
  for (const auto& col : cols) {
    for (Nuc x : kAlphabet) {
      if (x == z) continue;  // (z, A) is the anchor row
      const Nuc y = add(x, z);
      auto full = [&](const PosPattern& c, Nuc rx, Nuc ry) {
        PosPattern p = c;
        p.push_back(rx);
        p.push_back(ry);
        return p;
      };
      PosPattern head_anchor(anchor.begin(), anchor.begin() + head);
      PosBinomial b;
      b.tag = GenTag::kQuadricMinor;
      b.plus = {full(col, x, y), anchor};
      b.minus = {full(col, z, Nuc::A), full(head_anchor, x, y)};
      out.push_back(std::move(b));
    }
  }
  return out;
}

std::vector<PosBinomial> lci_pos(const Tree& t) {
  const int n = t.leaf_count();
  if (n == 3) {
    auto out = base_quartics_pos();
    out.push_back(hyperplane_pos(3));
    return out;
  }

  const Cherry cherry = t.canonical_cherry();
  const Tree arranged = t.with_cherry_last(cherry);
  const Tree collapsed = arranged.collapse_cherry(cherry);

  std::vector<PosBinomial> out;
  for (const auto& h : base_quartics_pos()) {
    out.push_back(map_binomial(h, GenTag::kLiftedClaw,
                               [](const PosPattern& p, int nn) { return j3_embed(p, nn); }, n));
  }
  for (const auto& g : lci_pos(collapsed)) {
    if (g.tag == GenTag::kHyperplane) continue;  // one hyperplane element, at the top
    out.push_back(map_binomial(g, GenTag::kLiftedCherry,
                               [](const PosPattern& p, int) { return psi_append(p); }, n));
  }
  for (Nuc z : kAlphabet) {
    auto k = quadric_minors_pos(n, z);
    out.insert(out.end(), k.begin(), k.end());
  }
  out.push_back(hyperplane_pos(n));

  // Back from the cherry-last arrangement to the caller's position space.
  std::vector<int> to_caller(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    to_caller[static_cast<std::size_t>(i)] = t.position_of_label(arranged.leaf_order()[i]);
  }
  for (auto& b : out) {
    for (auto* side : {&b.plus, &b.minus}) {
      for (auto& p : *side) {
        PosPattern moved(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) moved[static_cast<std::size_t>(to_caller[i])] = p[static_cast<std::size_t>(i)];
        p = std::move(moved);
      }
    }
  }
  return out;
}

Monomial to_monomial(const std::vector<PosPattern>& side) {
  Monomial m;
  for (const auto& p : side) m.ids.push_back(static_cast<std::uint32_t>(Pattern(p).id()));
  std::sort(m.ids.begin(), m.ids.end());
  return m;
}

}  // namespace

std::string tag_name(GenTag tag) {
  switch (tag) {
    case GenTag::kBase3: return "base3";
    case GenTag::kLiftedCherry: return "lifted_cherry";
    case GenTag::kLiftedClaw: return "lifted_claw";
    case GenTag::kQuadricMinor: return "quadric_minor";
    case GenTag::kHyperplane: return "hyperplane";
  }
  throw std::logic_error("unknown tag");
}

GenTag tag_from_name(const std::string& name) {
  if (name == "base3") return GenTag::kBase3;
  if (name == "lifted_cherry") return GenTag::kLiftedCherry;
  if (name == "lifted_claw") return GenTag::kLiftedClaw;
  if (name == "quadric_minor") return GenTag::kQuadricMinor;
  if (name == "hyperplane") return GenTag::kHyperplane;
  throw std::invalid_argument("unknown generator tag: " + name);
}

Binomial Binomial::make(Monomial a, Monomial b, GenTag tag) {
  Binomial out;
  out.tag = tag;
  if (tag != GenTag::kHyperplane && b < a) std::swap(a, b);
  out.plus = std::move(a);
  out.minus = std::move(b);
  return out;
}

double evaluate(const Binomial& b, const QVector& q) {
  auto product = [&](const Monomial& m) {
    double prod = 1.0;
    for (std::uint32_t id : m.ids) prod *= q.values[id];
    return prod;
  };
  return product(b.plus) - product(b.minus);
}

std::map<GenTag, int> InvariantSet::counts_by_tag() const {
  std::map<GenTag, int> counts;
  for (const auto& g : generators) ++counts[g.tag];
  return counts;
}

std::vector<Binomial> three_leaf_generators() {
  std::vector<Binomial> out;
  for (const auto& h : base_quartics_pos()) {
    out.push_back(Binomial::make(to_monomial(h.plus), to_monomial(h.minus), GenTag::kBase3));
  }
  out.push_back(Binomial::make(Monomial{{0}}, Monomial{}, GenTag::kHyperplane));
  return out;
}

std::vector<Binomial> quadric_minors(int n, Nuc z) {
  std::vector<Binomial> out;
  for (const auto& b : quadric_minors_pos(n, z)) {
    out.push_back(Binomial::make(to_monomial(b.plus), to_monomial(b.minus), b.tag));
  }
  return out;
}

InvariantSet lci(const Tree& t) {
  InvariantSet set;
  set.tree = t;
  for (const auto& b : lci_pos(t)) {
    set.generators.push_back(Binomial::make(to_monomial(b.plus), to_monomial(b.minus), b.tag));
  }
  return set;
}

std::string serialize(const InvariantSet& set) {
  nlohmann::json j;
  j["leaf_count"] = set.leaf_count();
  j["newick"] = set.tree.newick();
  nlohmann::json gens = nlohmann::json::array();
  const int n = set.leaf_count();
  for (const auto& g : set.generators) {
    nlohmann::json rec;
    rec["tag"] = tag_name(g.tag);
    auto side = [&](const Monomial& m) {
      nlohmann::json arr = nlohmann::json::array();
      for (std::uint32_t id : m.ids) arr.push_back(pattern_id_str(n, id));
      return arr;
    };
    rec["plus"] = side(g.plus);
    rec["minus"] = side(g.minus);
    gens.push_back(std::move(rec));
  }
  j["generators"] = std::move(gens);
  return j.dump(2) + "\n";
}

InvariantSet deserialize(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("invariant set: bad JSON: ") + e.what());
  }
  if (!j.contains("leaf_count") || !j.contains("newick") || !j.contains("generators")) {
    throw std::invalid_argument("invariant set: missing leaf_count/newick/generators");
  }
  InvariantSet set;
  set.tree = Tree::parse_newick(j["newick"].get<std::string>());
  const int n = j["leaf_count"].get<int>();
  if (n != set.tree.leaf_count()) {
    throw std::invalid_argument("invariant set: leaf_count disagrees with newick");
  }
  for (const auto& rec : j["generators"]) {
    auto side = [&](const nlohmann::json& arr) {
      Monomial m;
      for (const auto& s : arr) {
        Pattern p = Pattern::parse(s.get<std::string>());
        if (p.size() != n) throw std::invalid_argument("invariant set: pattern length mismatch");
        m.ids.push_back(static_cast<std::uint32_t>(p.id()));
      }
      std::sort(m.ids.begin(), m.ids.end());
      return m;
    };
    set.generators.push_back(Binomial::make(side(rec["plus"]), side(rec["minus"]),
                                            tag_from_name(rec["tag"].get<std::string>())));
  }
  return set;
}

}  // namespace kimura3
