#include "kimura3/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kimura3/invariants.hpp"
#include "kimura3/sampling.hpp"
#include "kimura3/scoring.hpp"
#include "kimura3/verify.hpp"

namespace kimura3 {

namespace {

// One table for every numeric default the subcommands expose as flags.
struct RunConfig {
  std::uint64_t seed = 0;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  bool json = false;
  bool quiet = false;
  int max_n = 8;
  double svd_cutoff = 1e-8;
  double qaa_tolerance = 1e-9;
  double pseudocount = 0.0;
  std::string agg = "mean";
};

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << text;
}

std::string format_value(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::vector<std::array<double, 4>> read_param_rows(const std::string& path, int edges) {
  std::istringstream in(read_text_file(path));
  std::vector<double> values;
  double x;
  while (in >> x) values.push_back(x);
  if (values.size() != static_cast<std::size_t>(4 * edges)) {
    throw std::invalid_argument("params file: expected " + std::to_string(4 * edges) +
                                " values (4 per edge, canonical edge order), got " +
                                std::to_string(values.size()));
  }
  std::vector<std::array<double, 4>> rows(static_cast<std::size_t>(edges));
  for (int e = 0; e < edges; ++e) {
    for (int k = 0; k < 4; ++k) rows[static_cast<std::size_t>(e)][k] = values[static_cast<std::size_t>(4 * e + k)];
  }
  return rows;
}

Tree tree_from_flag(const std::string& newick) {
  std::string warnings;
  Tree t = Tree::parse_newick(newick, &warnings);
  if (!warnings.empty()) std::cerr << "note: " << warnings;
  return t;
}

int cmd_gen(const std::string& newick, const std::string& out_path) {
  const InvariantSet set = lci(tree_from_flag(newick));
  write_output(out_path, serialize(set));
  return 0;
}

int cmd_topologies(int n, const RunConfig& cfg) {
  for (const Tree& t : enumerate_topologies(n, cfg.max_n)) std::cout << t.newick() << "\n";
  return 0;
}

int cmd_transform(const std::string& in_path, bool inverse) {
  std::istringstream in(in_path.empty() ? std::string(std::istreambuf_iterator<char>(std::cin), {})
                                        : read_text_file(in_path));
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  if (tokens.empty()) throw std::invalid_argument("transform: empty input");

  std::vector<double> values;
  int n = 0;
  if (std::isalpha(static_cast<unsigned char>(tokens.front()[0]))) {
    // "PATTERN count" table.
    if (tokens.size() % 2 != 0) throw std::invalid_argument("transform: odd pattern/count token count");
    n = static_cast<int>(tokens.front().size());
    values.assign(pattern_space_size(n), 0.0);
    for (std::size_t i = 0; i < tokens.size(); i += 2) {
      Pattern p = Pattern::parse(tokens[i]);
      if (p.size() != n) throw std::invalid_argument("transform: inconsistent pattern lengths");
      values[p.id()] += std::stod(tokens[i + 1]);
    }
  } else {
    for (const auto& s : tokens) values.push_back(std::stod(s));
    while (pattern_space_size(n) < values.size()) ++n;
    if (pattern_space_size(n) != values.size()) {
      throw std::invalid_argument("transform: vector length is not a power of 4");
    }
  }

  std::vector<double> out;
  if (inverse) {
    out = q_to_p(QVector{n, std::move(values)}).values;
  } else {
    out = p_to_q(PatternDistribution{n, std::move(values)}).values;
  }
  std::string text;
  for (double v : out) text += format_value(v) + "\n";
  std::cout << text;
  return 0;
}

int cmd_eval(const std::string& newick, const std::string& params_path,
             const std::string& frame) {
  const Tree t = tree_from_flag(newick);
  auto rows = read_param_rows(params_path, t.edge_count());
  ModelParams params{t, {}};
  for (const auto& row : rows) {
    params.edge.push_back(frame == "prob" ? params_to_fourier(row) : row);
  }
  const QVector q = phi(params);
  const int n = t.leaf_count();
  std::string text;
  for (std::uint64_t id = 0; id < q.values.size(); ++id) {
    if (pattern_id_sum(id) == Nuc::A) {
      text += pattern_id_str(n, id) + " " + format_value(q.values[id]) + "\n";
    }
  }
  std::cout << text;
  return 0;
}

int cmd_simulate(const std::string& newick, const std::string& params_path, std::size_t sites,
                 const RunConfig& cfg, const std::string& out_path) {
  const Tree t = tree_from_flag(newick);
  auto rows = read_param_rows(params_path, t.edge_count());
  const Alignment a = simulate(t, rows, sites, cfg.seed);
  write_output(out_path, to_fasta(a));
  return 0;
}

int cmd_score(const std::string& alignment_path, const std::string& topologies_arg,
              const RunConfig& cfg) {
  const Alignment a = read_fasta(read_text_file(alignment_path));
  ScoreOptions opts;
  opts.agg = aggregation_from_name(cfg.agg);
  opts.qaa_tolerance = cfg.qaa_tolerance;

  std::vector<Tree> candidates;
  const std::vector<Tree>* candidates_ptr = nullptr;
  if (!topologies_arg.empty() && topologies_arg != "all") {
    std::istringstream in(read_text_file(topologies_arg));
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      candidates.push_back(tree_from_flag(line));
    }
    if (candidates.empty()) throw std::invalid_argument("score: empty topology file");
    candidates_ptr = &candidates;
  }

  auto ranked = rank_topologies(a, opts, cfg.pseudocount, candidates_ptr, cfg.max_n,
                                cfg.threads);

  const bool tie = ranked.size() > 1 && ranked[0].score == ranked[1].score;
  if (cfg.json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& s : ranked) {
      nlohmann::json per_tag;
      std::map<GenTag, std::vector<std::pair<GenTag, double>>> grouped;
      for (const auto& pg : s.per_generator) grouped[pg.first].push_back(pg);
      for (const auto& [tag, list] : grouped) {
        double acc = 0.0;
        for (const auto& [t2, r] : list) acc += r;
        switch (opts.agg) {
          case Aggregation::kMean: acc /= static_cast<double>(list.size()); break;
          case Aggregation::kL1: break;
          case Aggregation::kL2: {
            acc = 0.0;
            for (const auto& [t2, r] : list) acc += r * r;
            acc = std::sqrt(acc);
            break;
          }
          case Aggregation::kMax: {
            acc = 0.0;
            for (const auto& [t2, r] : list) acc = std::max(acc, r);
            break;
          }
        }
        per_tag[tag_name(tag)] = acc;
      }
      j.push_back({{"newick", s.tree.newick()},
                   {"score", s.score},
                   {"per_tag_subscores", per_tag},
                   {"off_slice_mass", s.off_slice_mass}});
    }
    nlohmann::json report;
    report["skipped_columns"] = a.skipped;
    report["usable_columns"] = a.usable_sites();
    report["tie"] = tie;
    report["ranking"] = std::move(j);
    std::cout << report.dump(2) << "\n";
  } else {
    for (const auto& s : ranked) {
      std::cout << format_value(s.score) << " " << s.tree.newick() << "\n";
    }
  }
  if (tie && !cfg.quiet) {
    std::cerr << "warning: top topologies tie; the data does not separate them\n";
  }
  return 0;
}

int cmd_verify(int n, bool all_topologies, bool rank, const RunConfig& cfg) {
  std::vector<Tree> topologies = enumerate_topologies(n, cfg.max_n);
  if (!all_topologies) topologies.resize(1);

  std::vector<std::string> reports(topologies.size());
  std::vector<char> ok(topologies.size(), 1);

  auto check_topology = [&](std::size_t i) {
    const Tree& t = topologies[i];
    const std::string name = t.newick();
    std::ostringstream out;
    bool pass = true;
    auto line = [&](bool p, const std::string& what) {
      if (!p || !cfg.quiet) out << (p ? "PASS " : "FAIL ") << name << " " << what << "\n";
      pass = pass && p;
    };

    const InvariantSet set = lci(t);
    line(static_cast<std::int64_t>(set.generators.size()) == lci_size(n),
         "count " + std::to_string(set.generators.size()));
    for (std::size_t g = 0; g < set.generators.size(); ++g) {
      const Binomial& b = set.generators[g];
      if (b.is_hyperplane()) continue;
      line(vanishes_on_model(t, b), tag_name(b.tag) + " " + std::to_string(g));
    }
    if (rank) {
      const auto params = draw_biologically_meaningful(t, cfg.seed + i);
      const int r = jacobian_rank(set, phi(params), cfg.svd_cutoff);
      line(r == lci_size(n), "rank " + std::to_string(r));
    }
    reports[i] = out.str();
    ok[i] = pass ? 1 : 0;
  };

  const int workers = std::max(1, std::min<int>(cfg.threads, static_cast<int>(topologies.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < topologies.size(); ++i) check_topology(i);
  } else {
    std::atomic<std::size_t> next{0};
    auto loop = [&]() {
      for (std::size_t i = next.fetch_add(1); i < topologies.size(); i = next.fetch_add(1)) {
        check_topology(i);
      }
    };
    std::vector<std::future<void>> pool;
    for (int w = 0; w < workers; ++w) pool.push_back(std::async(std::launch::async, loop));
    for (auto& f : pool) f.get();
  }

  bool all_ok = true;
  for (std::size_t i = 0; i < topologies.size(); ++i) {
    std::cout << reports[i];
    all_ok = all_ok && ok[i];
  }
  std::cout << (all_ok ? "OK" : "FAILED") << " " << topologies.size() << " topologies, n=" << n
            << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int run_cli(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Kimura 3-parameter phylogenetic invariants toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", cfg.seed, "seed for stochastic operations");
  app.add_option("--threads", cfg.threads, "worker threads (output is order-deterministic)");
  app.add_flag("--json", cfg.json, "machine-readable output where supported");
  app.add_flag("--quiet", cfg.quiet, "suppress per-check PASS lines and warnings");
  app.add_option("--max-n", cfg.max_n, "largest leaf count for exact topology enumeration");

  std::string newick, out_path, params_path, in_path, alignment_path;
  std::string frame = "fourier";
  std::string topologies_arg = "all";
  std::size_t sites = 0;
  int n = 0;
  bool inverse = false, all_topologies = false, rank = false;

  auto* gen = app.add_subcommand("gen", "generator set for one topology");
  gen->add_option("--tree", newick, "unrooted Newick")->required();
  gen->add_option("--out", out_path, "output file (default stdout)");

  auto* transform = app.add_subcommand("transform", "Fourier transform of a pattern vector");
  transform->add_option("--in", in_path, "vector or PATTERN-count table (default stdin)");
  transform->add_flag("--inverse", inverse, "apply the inverse transform");

  auto* eval = app.add_subcommand("eval", "Fourier coordinates of a parameterized model");
  eval->add_option("--tree", newick, "unrooted Newick")->required();
  eval->add_option("--params", params_path, "4 reals per edge, canonical edge order")->required();
  eval->add_option("--frame", frame, "prob|fourier (default fourier)")
      ->check(CLI::IsMember({"prob", "fourier"}));

  auto* verify = app.add_subcommand("verify", "construction self-checks");
  verify->add_option("--n", n, "leaf count")->required();
  verify->add_flag("--all-topologies", all_topologies, "check every topology");
  verify->add_flag("--rank", rank, "also check the Jacobian rank at a seeded point");
  verify->add_option("--svd-cutoff", cfg.svd_cutoff, "relative singular value cutoff");

  auto* score = app.add_subcommand("score", "rank topologies against an alignment");
  score->add_option("--alignment", alignment_path, "FASTA file")->required();
  score->add_option("--agg", cfg.agg, "mean|l1|l2|max (default mean)")
      ->check(CLI::IsMember({"mean", "l1", "l2", "max"}));
  score->add_option("--pseudocount", cfg.pseudocount, "Laplace smoothing per pattern cell");
  score->add_option("--topologies", topologies_arg, "'all' or a file of Newick lines");
  score->add_option("--qaa-tol", cfg.qaa_tolerance, "allowed deviation of q_{A..A} from 1");

  auto* simulate = app.add_subcommand("simulate", "sample an alignment from the model");
  simulate->add_option("--tree", newick, "unrooted Newick")->required();
  simulate->add_option("--params", params_path, "probability rows (a b c d) per edge")->required();
  simulate->add_option("--sites", sites, "alignment length")->required();
  simulate->add_option("--out", out_path, "output FASTA (default stdout)");

  auto* topologies = app.add_subcommand("topologies", "list all topologies on n leaves");
  topologies->add_option("--n", n, "leaf count")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (cfg.threads < 1) cfg.threads = 1;

  try {
    if (gen->parsed()) return cmd_gen(newick, out_path);
    if (transform->parsed()) return cmd_transform(in_path, inverse);
    if (eval->parsed()) return cmd_eval(newick, params_path, frame);
    if (verify->parsed()) return cmd_verify(n, all_topologies, rank, cfg);
    if (score->parsed()) return cmd_score(alignment_path, topologies_arg, cfg);
    if (simulate->parsed()) return cmd_simulate(newick, params_path, sites, cfg, out_path);
    if (topologies->parsed()) return cmd_topologies(n, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace kimura3
