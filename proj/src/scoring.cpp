#include "kimura3/scoring.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>

#include "kimura3/rng.hpp"

namespace kimura3 {

Alignment read_fasta(const std::string& text) {
  std::vector<std::string> seqs;
  std::string current;
  bool in_record = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '>') {
      if (in_record) seqs.push_back(std::move(current));
      current.clear();
      in_record = true;
      continue;
    }
    if (!in_record) throw std::invalid_argument("fasta: sequence data before any '>' header");
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        current.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
      }
    }
  }
  if (in_record) seqs.push_back(std::move(current));

  if (seqs.size() < 3) throw std::invalid_argument("fasta: need at least 3 records");
  const std::size_t len = seqs.front().size();
  for (const auto& s : seqs) {
    if (s.size() != len) throw std::invalid_argument("fasta: records of unequal length");
  }

  Alignment a;
  a.n = static_cast<int>(seqs.size());
  for (std::size_t site = 0; site < len; ++site) {
    std::uint32_t id = 0;
    bool usable = true;
    for (std::size_t row = 0; row < seqs.size(); ++row) {
      const char c = seqs[row][site];
      if (c != 'A' && c != 'C' && c != 'G' && c != 'T') {
        usable = false;
        break;
      }
      id |= static_cast<std::uint32_t>(nuc_from_char(c)) << (2 * row);
    }
    if (usable) {
      a.column_ids.push_back(id);
    } else {
      ++a.skipped;
    }
  }
  if (a.column_ids.empty()) throw std::invalid_argument("fasta: no usable columns");
  return a;
}

PatternDistribution empirical_frequencies(const Alignment& a, double pseudocount) {
  if (a.column_ids.empty()) throw std::invalid_argument("empirical_frequencies: empty alignment");
  PatternDistribution p{a.n, std::vector<double>(pattern_space_size(a.n), pseudocount)};
  for (std::uint32_t id : a.column_ids) p.values[id] += 1.0;
  double total = static_cast<double>(a.column_ids.size()) +
                 pseudocount * static_cast<double>(p.values.size());
  for (double& x : p.values) x /= total;
  return p;
}

Aggregation aggregation_from_name(const std::string& name) {
  if (name == "mean") return Aggregation::kMean;
  if (name == "l1") return Aggregation::kL1;
  if (name == "l2") return Aggregation::kL2;
  if (name == "max") return Aggregation::kMax;
  throw std::invalid_argument("unknown aggregation: " + name + " (want mean|l1|l2|max)");
}

namespace {

double aggregate(const std::vector<std::pair<GenTag, double>>& residuals, Aggregation agg) {
  if (residuals.empty()) return 0.0;
  double acc = 0.0;
  switch (agg) {
    case Aggregation::kMean:
      for (const auto& [tag, r] : residuals) acc += r;
      return acc / static_cast<double>(residuals.size());
    case Aggregation::kL1:
      for (const auto& [tag, r] : residuals) acc += r;
      return acc;
    case Aggregation::kL2:
      for (const auto& [tag, r] : residuals) acc += r * r;
      return std::sqrt(acc);
    case Aggregation::kMax:
      for (const auto& [tag, r] : residuals) acc = std::max(acc, r);
      return acc;
  }
  throw std::logic_error("unknown aggregation");
}

}  // namespace

TopologyScore score_topology(const Tree& t, const QVector& q, const ScoreOptions& opts) {
  if (q.n != t.leaf_count()) throw std::invalid_argument("score_topology: leaf count mismatch");
  if (t.leaf_order() != t.leaf_labels_sorted()) {
    // Data vectors are indexed by leaf label; a rearranged tree would read
    // them against the wrong positions.
    throw std::invalid_argument("score_topology: tree must be in label order");
  }
  if (std::abs(q.values[0] - 1.0) > opts.qaa_tolerance) {
    throw std::invalid_argument("score_topology: q at the all-A pattern is not 1 (unnormalized input)");
  }

  TopologyScore out;
  out.tree = t;
  out.off_slice_mass = q.off_slice_mass();
  const InvariantSet set = lci(t);
  for (const Binomial& b : set.generators) {
    if (b.is_hyperplane()) continue;
    auto product = [&](const Monomial& m) {
      double prod = 1.0;
      for (std::uint32_t id : m.ids) prod *= q.values[id];
      return prod;
    };
    const double plus = product(b.plus);
    const double minus = product(b.minus);
    const double denom = std::max(std::abs(plus) + std::abs(minus), opts.residual_floor);
    out.per_generator.emplace_back(b.tag, std::abs(plus - minus) / denom);
  }
  out.score = aggregate(out.per_generator, opts.agg);
  return out;
}

std::vector<TopologyScore> rank_topologies(const Alignment& a, const ScoreOptions& opts,
                                           double pseudocount,
                                           const std::vector<Tree>* candidates, int max_n,
                                           int threads) {
  std::vector<Tree> own;
  if (candidates == nullptr) {
    own = enumerate_topologies(a.n, max_n);
    candidates = &own;
  }
  const QVector q = p_to_q(empirical_frequencies(a, pseudocount));

  std::vector<TopologyScore> scores(candidates->size());
  if (threads <= 1 || candidates->size() < 2) {
    for (std::size_t i = 0; i < candidates->size(); ++i) {
      scores[i] = score_topology((*candidates)[i], q, opts);
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (std::size_t i = next.fetch_add(1); i < candidates->size(); i = next.fetch_add(1)) {
        scores[i] = score_topology((*candidates)[i], q, opts);
      }
    };
    std::vector<std::future<void>> pool;
    for (int w = 0; w < threads; ++w) pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
  }

  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return scores[i].score < scores[j].score; });
  std::vector<TopologyScore> ranked;
  ranked.reserve(scores.size());
  for (std::size_t i : order) ranked.push_back(std::move(scores[i]));
  return ranked;
}

Alignment simulate(const Tree& t, const std::vector<std::array<double, 4>>& prob_edges,
                   std::size_t sites, std::uint64_t seed) {
  if (prob_edges.size() != static_cast<std::size_t>(t.edge_count())) {
    throw std::invalid_argument("simulate: need one probability row per edge");
  }
  ModelParams params{t, {}};
  for (const auto& row : prob_edges) {
    double sum = 0.0;
    for (double x : row) {
      if (x < 0.0) throw std::invalid_argument("simulate: negative substitution probability");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("simulate: substitution rows must sum to 1");
    }
    params.edge.push_back(params_to_fourier(row));
  }

  const PatternDistribution joint = joint_probability(params);
  std::vector<double> cdf(joint.values.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < joint.values.size(); ++i) {
    acc += joint.values[i];
    cdf[i] = acc;
  }

  Rng rng(seed);
  Alignment a;
  a.n = t.leaf_count();
  a.column_ids.reserve(sites);
  for (std::size_t s = 0; s < sites; ++s) {
    const double u = rng.uniform() * acc;
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    a.column_ids.push_back(static_cast<std::uint32_t>(it == cdf.end() ? cdf.size() - 1
                                                                      : it - cdf.begin()));
  }
  return a;
}

std::string to_fasta(const Alignment& a) {
  std::string out;
  for (int row = 0; row < a.n; ++row) {
    out += ">" + std::to_string(row + 1) + "\n";
    std::string seq;
    seq.reserve(a.column_ids.size());
    for (std::uint32_t id : a.column_ids) {
      seq.push_back(to_char(static_cast<Nuc>((id >> (2 * row)) & 3u)));
    }
    out += seq + "\n";
  }
  return out;
}

}  // namespace kimura3
