#include "chowliu/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chowliu {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

Json to_json(const TreeModel& m) {
  Json parents = Json::array();
  for (Node i = 0; i < m.n(); ++i) {
    if (i == m.tree.root()) {
      parents.push_back(-1);
    } else {
      parents.push_back(m.tree.parent(i));
    }
  }
  Json cpt = Json::object();
  for (Node i = 0; i < m.n(); ++i) {
    if (i == m.tree.root()) continue;
    Json rows = Json::array();
    for (std::size_t x = 0; x < m.k(); ++x) {
      rows.push_back(std::vector<double>(m.cpt[i].begin() + static_cast<std::ptrdiff_t>(x * m.k()),
                                         m.cpt[i].begin() + static_cast<std::ptrdiff_t>((x + 1) * m.k())));
    }
    cpt[std::to_string(i)] = std::move(rows);
  }
  Json j;
  j["n"] = m.n();
  j["k"] = m.k();
  j["root"] = m.tree.root();
  j["parents"] = std::move(parents);
  j["root_marginal"] = m.root_marginal;
  j["cpt"] = std::move(cpt);
  return j;
}

TreeModel tree_model_from_json(const Json& j) {
  const auto n = field<std::size_t>(j, "n");
  const auto k = field<std::size_t>(j, "k");
  const auto root = field<std::size_t>(j, "root");
  const auto raw_parents = field<std::vector<long long>>(j, "parents");
  if (raw_parents.size() != n) throw std::invalid_argument("parents: expected n entries");
  std::vector<Node> parents(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (raw_parents[i] < 0) {
      parents[i] = kNoParent;
    } else {
      parents[i] = static_cast<Node>(raw_parents[i]);
    }
  }
  RootedTree tree(root, std::move(parents));
  auto root_marginal = field<std::vector<double>>(j, "root_marginal");
  if (!j.contains("cpt") || !j.at("cpt").is_object()) throw std::invalid_argument("missing object field 'cpt'");
  const auto& cj = j.at("cpt");
  std::vector<std::vector<double>> cpt(n);
  for (Node i = 0; i < n; ++i) {
    if (i == root) continue;
    const auto key = std::to_string(i);
    if (!cj.contains(key)) throw std::invalid_argument("cpt: missing table for node " + key);
    const auto rows = cj.at(key).get<std::vector<std::vector<double>>>();
    if (rows.size() != k) throw std::invalid_argument("cpt[" + key + "]: expected k rows");
    for (const auto& r : rows) {
      if (r.size() != k) throw std::invalid_argument("cpt[" + key + "]: expected k columns");
      cpt[i].insert(cpt[i].end(), r.begin(), r.end());
    }
  }
  TreeModel m{std::move(tree), Alphabet(k), std::move(root_marginal), std::move(cpt)};
  validate_tree_model(m);
  return m;
}

Json to_json(const DenseJoint& p) {
  Json j;
  j["n"] = p.n();
  j["k"] = p.k();
  j["probs"] = std::vector<double>(p.probs().begin(), p.probs().end());
  return j;
}

DenseJoint dense_joint_from_json(const Json& j) {
  return DenseJoint(field<std::size_t>(j, "n"), Alphabet(field<std::size_t>(j, "k")),
                    field<std::vector<double>>(j, "probs"));
}

Json to_json(const UndirectedTree& t) {
  Json edges = Json::array();
  for (const auto& e : t.edges()) edges.push_back({e.u, e.v});
  Json j;
  j["n"] = t.n();
  j["edges"] = std::move(edges);
  return j;
}

UndirectedTree undirected_tree_from_json(const Json& j) {
  const auto n = field<std::size_t>(j, "n");
  const auto raw = field<std::vector<std::vector<std::size_t>>>(j, "edges");
  std::vector<Edge> edges;
  for (const auto& e : raw) {
    if (e.size() != 2) throw std::invalid_argument("edges: each edge must have two endpoints");
    edges.push_back({e[0], e[1]});
  }
  return UndirectedTree(n, std::move(edges));
}

Json to_json(const TesterConfig& cfg) {
  Json j;
  j["epsilon"] = cfg.epsilon;
  j["delta"] = cfg.delta;
  j["k"] = cfg.k;
  j["c_sample"] = cfg.c_sample;
  j["c_decision"] = cfg.c_decision;
  return j;
}

TesterConfig tester_config_from_json(const Json& j, TesterConfig base) {
  if (j.contains("epsilon")) base.epsilon = field<double>(j, "epsilon");
  if (j.contains("delta")) base.delta = field<double>(j, "delta");
  if (j.contains("k")) base.k = field<std::size_t>(j, "k");
  if (j.contains("c_sample")) base.c_sample = field<double>(j, "c_sample");
  if (j.contains("c_decision")) base.c_decision = field<double>(j, "c_decision");
  base.validate();
  return base;
}

Json to_json(const TestVerdict& v) {
  Json j;
  j["verdict"] = to_string(v.verdict);
  j["statistic"] = v.statistic;
  j["threshold"] = v.threshold;
  j["samples"] = v.samples;
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, path + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << dump(j);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace chowliu
