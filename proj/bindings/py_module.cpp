#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "kimura3/invariants.hpp"
#include "kimura3/sampling.hpp"
#include "kimura3/scoring.hpp"
#include "kimura3/verify.hpp"

namespace py = pybind11;
using namespace kimura3;

namespace {

QVector qvector_from_list(int n, const std::vector<double>& values) {
  if (values.size() != pattern_space_size(n)) {
    throw std::invalid_argument("expected a vector of length 4^n");
  }
  return QVector{n, values};
}

std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> generator_patterns(
    const InvariantSet& set) {
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> out;
  const int n = set.leaf_count();
  for (const auto& g : set.generators) {
    std::vector<std::string> plus, minus;
    for (auto id : g.plus.ids) plus.push_back(pattern_id_str(n, id));
    for (auto id : g.minus.ids) minus.push_back(pattern_id_str(n, id));
    out.emplace_back(std::move(plus), std::move(minus));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Kimura 3-parameter model invariants on trivalent trees";

  py::class_<Tree>(m, "Tree")
      .def_static("parse_newick", [](const std::string& s) { return Tree::parse_newick(s); })
      .def_property_readonly("leaf_count", &Tree::leaf_count)
      .def_property_readonly("edge_count", &Tree::edge_count)
      .def_property_readonly("interior_count", &Tree::interior_count)
      .def("newick", &Tree::newick)
      .def("same_topology", &Tree::same_topology)
      .def("__repr__", [](const Tree& t) { return "Tree('" + t.newick() + "')"; });

  py::class_<Binomial>(m, "Binomial")
      .def_property_readonly("tag", [](const Binomial& b) { return tag_name(b.tag); })
      .def("__repr__", [](const Binomial& b) {
        std::ostringstream ss;
        ss << "Binomial(" << tag_name(b.tag) << ", degree " << b.plus.degree() << ")";
        return ss.str();
      });

  py::class_<InvariantSet>(m, "InvariantSet")
      .def_property_readonly("tree", [](const InvariantSet& s) { return s.tree; })
      .def_property_readonly("size", [](const InvariantSet& s) { return s.generators.size(); })
      .def_property_readonly("generators", &generator_patterns)
      .def_property_readonly("tags",
                             [](const InvariantSet& s) {
                               std::vector<std::string> tags;
                               for (const auto& g : s.generators) tags.push_back(tag_name(g.tag));
                               return tags;
                             })
      .def("to_json", &serialize)
      .def("evaluate",
           [](const InvariantSet& s, const std::vector<double>& q) {
             const QVector qv = qvector_from_list(s.leaf_count(), q);
             std::vector<double> out;
             for (const auto& g : s.generators) out.push_back(evaluate(g, qv));
             return out;
           })
      .def("__len__", [](const InvariantSet& s) { return s.generators.size(); });

  py::class_<TopologyScore>(m, "TopologyScore")
      .def_property_readonly("newick", [](const TopologyScore& s) { return s.tree.newick(); })
      .def_readonly("score", &TopologyScore::score)
      .def_readonly("off_slice_mass", &TopologyScore::off_slice_mass);

  py::class_<Alignment>(m, "Alignment")
      .def_property_readonly("n", [](const Alignment& a) { return a.n; })
      .def_property_readonly("sites", &Alignment::usable_sites)
      .def_readonly("skipped", &Alignment::skipped)
      .def("to_fasta", &to_fasta);

  m.def("parse_newick", [](const std::string& s) { return Tree::parse_newick(s); },
        py::arg("newick"));
  m.def("enumerate_topologies", &enumerate_topologies, py::arg("n"), py::arg("max_n") = 8);
  m.def("lci", &lci, py::arg("tree"), "Local complete intersection generators of a topology");
  m.def("lci_size", &lci_size, py::arg("n"));
  m.def("three_leaf_generators", [] {
    InvariantSet set;
    set.tree = Tree::parse_newick("(1,2,3);");
    set.generators = three_leaf_generators();
    return generator_patterns(set);
  });
  m.def("quadric_minors",
        [](int n, const std::string& z) {
          InvariantSet set;
          std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> out;
          for (const auto& b : quadric_minors(n, nuc_from_char(z.at(0)))) {
            std::vector<std::string> plus, minus;
            for (auto id : b.plus.ids) plus.push_back(pattern_id_str(n, id));
            for (auto id : b.minus.ids) minus.push_back(pattern_id_str(n, id));
            out.emplace_back(std::move(plus), std::move(minus));
          }
          return out;
        },
        py::arg("n"), py::arg("z"));
  m.def("deserialize", &deserialize, py::arg("text"));

  m.def("p_to_q", [](int n, const std::vector<double>& p) {
    return p_to_q(PatternDistribution{n, p}).values;
  });
  m.def("q_to_p", [](int n, const std::vector<double>& q) {
    return q_to_p(qvector_from_list(n, q)).values;
  });

  m.def("phi",
        [](const Tree& t, const std::vector<std::array<double, 4>>& edges) {
          ModelParams params{t, edges};
          return phi(params).values;
        },
        py::arg("tree"), py::arg("fourier_edges"),
        "Fourier coordinates of the model at the given per-edge parameters");
  m.def("joint_probability", [](const Tree& t, const std::vector<std::array<double, 4>>& edges) {
    return joint_probability(ModelParams{t, edges}).values;
  });

  m.def("vanishes_on_model", [](const Tree& t, const InvariantSet& set) {
    for (const auto& g : set.generators) {
      if (!g.is_hyperplane() && !vanishes_on_model(t, g)) return false;
    }
    return true;
  });
  m.def("jacobian_rank",
        [](const InvariantSet& set, const std::vector<double>& q, double cutoff) {
          return jacobian_rank(set, qvector_from_list(set.leaf_count(), q), cutoff);
        },
        py::arg("set"), py::arg("q"), py::arg("svd_cutoff") = 1e-8);

  m.def("read_fasta", &read_fasta, py::arg("text"));
  m.def("simulate", &simulate, py::arg("tree"), py::arg("prob_edges"), py::arg("sites"),
        py::arg("seed"));
  m.def("score_topology",
        [](const Tree& t, const std::vector<double>& q, const std::string& agg) {
          ScoreOptions opts;
          opts.agg = aggregation_from_name(agg);
          return score_topology(t, qvector_from_list(t.leaf_count(), q), opts);
        },
        py::arg("tree"), py::arg("q"), py::arg("agg") = "mean");
  m.def("rank_topologies",
        [](const Alignment& a, const std::string& agg, double pseudocount) {
          ScoreOptions opts;
          opts.agg = aggregation_from_name(agg);
          return rank_topologies(a, opts, pseudocount);
        },
        py::arg("alignment"), py::arg("agg") = "mean", py::arg("pseudocount") = 0.0);

  m.attr("__version__") = "0.1.0";
}
