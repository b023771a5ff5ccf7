#include <doctest.h>

#include <cmath>

#include "kimura3/sampling.hpp"
#include "kimura3/scoring.hpp"

using namespace kimura3;

TEST_CASE("fasta parsing") {
  const Alignment a = read_fasta(">s1\nACGT\n>s2\nACGT\n>s3\nACGT\n");
  CHECK(a.n == 3);
  REQUIRE(a.usable_sites() == 4);
  CHECK(a.column_ids[0] == Pattern::parse("AAA").id());
  CHECK(a.column_ids[1] == Pattern::parse("CCC").id());
  CHECK(a.column_ids[2] == Pattern::parse("GGG").id());
  CHECK(a.column_ids[3] == Pattern::parse("TTT").id());
  CHECK(a.skipped == 0);

  const Alignment gapped = read_fasta(">a\nACGT\n>b\nAC-T\n>c\nACGT\n");
  CHECK(gapped.usable_sites() == 3);
  CHECK(gapped.skipped == 1);

  const Alignment lower = read_fasta(">a\nacg\n>b\nacg\n>c\nacg\n");
  CHECK(lower.usable_sites() == 3);

  CHECK_THROWS_AS(read_fasta(">a\nACGT\n>b\nACGTA\n>c\nACGT\n"), std::invalid_argument);
  CHECK_THROWS_AS(read_fasta(">a\nACGT\n>b\nACGT\n"), std::invalid_argument);
  CHECK_THROWS_AS(read_fasta(">a\nNN\n>b\nNN\n>c\nNN\n"), std::invalid_argument);
}

TEST_CASE("empirical frequencies") {
  Alignment a;
  a.n = 3;
  a.column_ids = {static_cast<std::uint32_t>(Pattern::parse("AAA").id())};
  const auto point = empirical_frequencies(a);
  CHECK(point.values[0] == 1.0);

  a.column_ids.push_back(static_cast<std::uint32_t>(Pattern::parse("CCA").id()));
  const auto half = empirical_frequencies(a);
  CHECK(half.values[Pattern::parse("AAA").id()] == 0.5);
  CHECK(half.values[Pattern::parse("CCA").id()] == 0.5);

  a.column_ids.pop_back();
  const auto smoothed = empirical_frequencies(a, 1.0);
  CHECK(smoothed.values[0] == doctest::Approx(2.0 / 65.0).epsilon(1e-15));
  CHECK(smoothed.values[1] == doctest::Approx(1.0 / 65.0).epsilon(1e-15));
  double total = 0.0;
  for (double x : smoothed.values) total += x;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("scoring an exact model point") {
  const Tree truth = Tree::parse_newick("((1,2),(3,4));");
  const auto all = enumerate_topologies(4);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const QVector q = phi(draw_box(truth, 600 + seed, 0.3, 0.9));
    double true_score = -1.0;
    double best_other = 1e300;
    for (const Tree& t : all) {
      const double s = score_topology(t, q).score;
      if (t.same_topology(truth)) {
        true_score = s;
      } else {
        best_other = std::min(best_other, s);
      }
    }
    CHECK(true_score < 1e-10);
    CHECK(best_other > true_score);
    CHECK(best_other > 1e-6);
  }
}

TEST_CASE("the all-ones point scores zero on every topology") {
  QVector ones{4, std::vector<double>(256, 0.0)};
  for (std::uint64_t id = 0; id < 256; ++id) {
    if (pattern_id_sum(id) == Nuc::A) ones.values[id] = 1.0;
  }
  for (const Tree& t : enumerate_topologies(4)) {
    CHECK(score_topology(t, ones).score == 0.0);
  }
}

TEST_CASE("scoring rejects unnormalized input") {
  QVector q{4, std::vector<double>(256, 0.0)};
  q.values[0] = 1.5;
  CHECK_THROWS_AS(score_topology(Tree::parse_newick("((1,2),(3,4));"), q),
                  std::invalid_argument);
}

TEST_CASE("scoring rejects a rearranged tree") {
  const Tree t = Tree::parse_newick("((1,2),(3,4));");
  const Tree rearranged = t.with_cherry_last(t.cherries()[0]);
  QVector q{4, std::vector<double>(256, 0.0)};
  q.values[0] = 1.0;
  CHECK_THROWS_AS(score_topology(rearranged, q), std::invalid_argument);
}

TEST_CASE("simulation determinism and identity channel") {
  const Tree t = Tree::parse_newick("((1,2),(3,4));");
  std::vector<std::array<double, 4>> identity_rows(5, {1.0, 0.0, 0.0, 0.0});
  const Alignment a = simulate(t, identity_rows, 4000, 7);
  REQUIRE(a.usable_sites() == 4000);
  std::array<std::size_t, 4> counts{};
  for (std::uint32_t id : a.column_ids) {
    const Pattern p = Pattern::from_id(4, id);
    CHECK(p[0] == p[1]);
    CHECK(p[1] == p[2]);
    CHECK(p[2] == p[3]);
    ++counts[static_cast<int>(p[0])];
  }
  for (std::size_t c : counts) {
    CHECK(static_cast<double>(c) / 4000.0 == doctest::Approx(0.25).epsilon(0.15));
  }

  const Alignment b = simulate(t, identity_rows, 4000, 7);
  CHECK(a.column_ids == b.column_ids);
  CHECK(to_fasta(a) == to_fasta(b));
  const Alignment c = simulate(t, identity_rows, 4000, 8);
  CHECK(a.column_ids != c.column_ids);

  std::vector<std::array<double, 4>> bad_rows(5, {0.9, 0.0, 0.0, 0.0});
  CHECK_THROWS_AS(simulate(t, bad_rows, 10, 1), std::invalid_argument);
}

TEST_CASE("empirical transform converges to the model point") {
  const Tree t = Tree::parse_newick("((1,2),(3,4));");
  const ModelParams params = draw_stochastic(t, 12345, 0.3, 0.9);
  const Alignment a = simulate(t, to_prob_rows(params), 100000, 99);
  const QVector empirical = p_to_q(empirical_frequencies(a));
  const QVector exact = phi(params);
  double worst = 0.0;
  for (std::uint64_t id = 0; id < 256; ++id) {
    if (pattern_id_sum(id) == Nuc::A) {
      worst = std::max(worst, std::abs(empirical.values[id] - exact.values[id]));
    }
  }
  CHECK(worst < 0.02);
}

TEST_CASE("ranking simulated data recovers the topology") {
  const Tree truth = Tree::parse_newick("((1,2),(3,4));");
  const ModelParams params = draw_stochastic(truth, 4242, 0.3, 0.9);
  const Alignment a = simulate(truth, to_prob_rows(params), 10000, 17);
  const auto ranked = rank_topologies(a);
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].tree.same_topology(truth));
  CHECK(ranked[0].score < ranked[1].score);
}

TEST_CASE("ranking a five leaf alignment emits fifteen scores") {
  const Tree truth = Tree::parse_newick("(1,(2,3),(4,5));");
  const ModelParams params = draw_stochastic(truth, 5150, 0.4, 0.8);
  const Alignment a = simulate(truth, to_prob_rows(params), 2000, 3);
  CHECK(rank_topologies(a).size() == 15);
}

TEST_CASE("more sites mean sharper reconstruction") {
  const Tree truth = Tree::parse_newick("((1,2),(3,4));");
  const std::size_t lengths[] = {1000, 10000, 100000};
  std::array<std::vector<double>, 3> true_scores;
  std::array<int, 3> wins{};

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ModelParams params = draw_stochastic(truth, 14000 + seed, 0.3, 0.9);
    for (int k = 0; k < 3; ++k) {
      const Alignment a = simulate(truth, to_prob_rows(params), lengths[k], 15000 + seed);
      const auto ranked = rank_topologies(a);
      if (ranked.front().tree.same_topology(truth)) ++wins[k];
      for (const auto& s : ranked) {
        if (s.tree.same_topology(truth)) true_scores[k].push_back(s.score);
      }
    }
  }

  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  CHECK(median(true_scores[0]) >= median(true_scores[1]));
  CHECK(median(true_scores[1]) >= median(true_scores[2]));
  CHECK(wins[0] <= wins[1]);
  CHECK(wins[1] <= wins[2]);
  CHECK(wins[2] == 50);
}

TEST_CASE("degenerate data ties all topologies at zero") {
  Alignment a;
  a.n = 4;
  a.column_ids.assign(60, 0);  // every column all-A
  const auto ranked = rank_topologies(a);
  REQUIRE(ranked.size() == 3);
  for (const auto& s : ranked) CHECK(s.score == 0.0);
  CHECK(ranked[0].score == ranked[1].score);
}

TEST_CASE("scores are invariant under count rescaling") {
  const Tree truth = Tree::parse_newick("((1,2),(3,4));");
  const Alignment a = simulate(truth, to_prob_rows(draw_stochastic(truth, 31415, 0.3, 0.9)),
                               500, 2);
  Alignment doubled = a;
  doubled.column_ids.insert(doubled.column_ids.end(), a.column_ids.begin(),
                            a.column_ids.end());
  const auto once = rank_topologies(a);
  const auto twice = rank_topologies(doubled);
  REQUIRE(once.size() == twice.size());
  for (std::size_t i = 0; i < once.size(); ++i) {
    CHECK(once[i].score == twice[i].score);
    CHECK(once[i].tree.same_topology(twice[i].tree));
  }
}

TEST_CASE("aggregation options") {
  CHECK(aggregation_from_name("mean") == Aggregation::kMean);
  CHECK(aggregation_from_name("l2") == Aggregation::kL2);
  CHECK_THROWS_AS(aggregation_from_name("median"), std::invalid_argument);

  const Tree truth = Tree::parse_newick("((1,2),(3,4));");
  const QVector q = phi(draw_box(truth, 1, 0.3, 0.9));
  const Tree wrong = Tree::parse_newick("((1,3),(2,4));");
  ScoreOptions opts;
  opts.agg = Aggregation::kMax;
  const double max_score = score_topology(wrong, q, opts).score;
  opts.agg = Aggregation::kMean;
  const double mean_score = score_topology(wrong, q, opts).score;
  opts.agg = Aggregation::kL1;
  const double l1_score = score_topology(wrong, q, opts).score;
  CHECK(mean_score <= max_score);
  CHECK(max_score <= l1_score);
  CHECK(l1_score == doctest::Approx(mean_score * 48).epsilon(1e-12));
}
