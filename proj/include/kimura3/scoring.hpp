#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kimura3/fourier.hpp"
#include "kimura3/invariants.hpp"
#include "kimura3/model.hpp"
#include "kimura3/tree.hpp"

namespace kimura3 {

// Columns of an alignment as patterns (row i of the file = leaf label i+1 =
// pattern position i). Columns containing anything outside ACGT are dropped
// whole and counted in skipped.
struct Alignment {
  int n = 0;
  std::vector<std::uint32_t> column_ids;
  std::size_t skipped = 0;

  std::size_t usable_sites() const { return column_ids.size(); }
};

// FASTA with >= 3 records of equal length; lowercase is normalized first.
Alignment read_fasta(const std::string& text);

// Relative pattern frequencies, optionally Laplace-smoothed by adding
// pseudocount to every one of the 4^n cells before normalizing.
PatternDistribution empirical_frequencies(const Alignment& a, double pseudocount = 0.0);

enum class Aggregation { kMean, kL1, kL2, kMax };
Aggregation aggregation_from_name(const std::string& name);

struct TopologyScore {
  Tree tree;
  double score = 0.0;
  std::vector<std::pair<GenTag, double>> per_generator;  // normalized magnitudes
  double off_slice_mass = 0.0;
};

struct ScoreOptions {
  Aggregation agg = Aggregation::kMean;
  // Commensurability floor for the |plus| + |minus| denominator.
  double residual_floor = 1e-300;
  // Allowed deviation of q_{A..A} from 1 before input counts as
  // unnormalized.
  double qaa_tolerance = 1e-9;
};

// Evaluates every non-hyperplane generator of lci(t) at q, normalizing each
// residual by the sum of its two monomial magnitudes. Requires q_{A..A} = 1
// within qaa_tolerance.
TopologyScore score_topology(const Tree& t, const QVector& q,
                             const ScoreOptions& opts = {});

// Scores either every topology on n leaves or the given candidates,
// ascending by score; ties keep enumeration order.
std::vector<TopologyScore> rank_topologies(const Alignment& a,
                                           const ScoreOptions& opts = {},
                                           double pseudocount = 0.0,
                                           const std::vector<Tree>* candidates = nullptr,
                                           int max_n = 8, int threads = 1);

// N independent site draws from the joint distribution of the model,
// inverse-CDF over the full pattern table. Params are probability-frame
// rows (a, b, c, d) per canonical edge, each a point of the simplex.
Alignment simulate(const Tree& t, const std::vector<std::array<double, 4>>& prob_edges,
                   std::size_t sites, std::uint64_t seed);

std::string to_fasta(const Alignment& a);

}  // namespace kimura3
