#pragma once

#include <string>

#include "json.hpp"

#include "chowliu/citest.hpp"
#include "chowliu/model.hpp"

namespace chowliu {

using Json = nlohmann::ordered_json;

// TreeModel: {n, k, root, parents: [-1 for the root], root_marginal, cpt: {"node": [[row]...]}}
Json to_json(const TreeModel& m);
TreeModel tree_model_from_json(const Json& j);

// DenseJoint: {n, k, probs} in mixed-radix order.
Json to_json(const DenseJoint& p);
DenseJoint dense_joint_from_json(const Json& j);

// UndirectedTree: {n, edges: [[u, v]...]} with u < v, sorted.
Json to_json(const UndirectedTree& t);
UndirectedTree undirected_tree_from_json(const Json& j);

Json to_json(const TesterConfig& cfg);
/// Missing fields keep the values already in `base`.
TesterConfig tester_config_from_json(const Json& j, TesterConfig base = {});

Json to_json(const TestVerdict& v);

Json read_json_file(const std::string& path);
/// Pretty-printed with two-space indent and a trailing newline.
void write_json_file(const std::string& path, const Json& j);
std::string dump(const Json& j);

}  // namespace chowliu
