// Copyright 2026 The gwflow Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GWFLOW_DAG_HPP
#define GWFLOW_DAG_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gwflow/types.hpp"

namespace gwflow {

/// One workflow DAG node. `args` carries stage parameters re-derivable from
/// the configuration; it is not part of the serialized DAG format.
struct TaskSpec {
  std::string id;
  std::string transformation;
  std::vector<std::string> parents;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  double request_mem_mb = 1024.0;
  std::vector<std::string> required_features;
  int max_retries = 5;
  std::map<std::string, std::string> args;
};

struct Dag {
  std::vector<TaskSpec> tasks;

  const TaskSpec* find(const std::string& id) const {
    for (const auto& t : tasks)
      if (t.id == id) return &t;
    return nullptr;
  }

  /// Checks id uniqueness, parent existence, acyclicity, and that every
  /// input is an initial file or a parent's output.
  void validate(const std::set<std::string>& initial_files) const {
    std::set<std::string> ids;
    for (const auto& t : tasks)
      if (!ids.insert(t.id).second) throw make_error("dag", "duplicate task id " + t.id);

    std::map<std::string, const TaskSpec*> by_id;
    for (const auto& t : tasks) by_id[t.id] = &t;
    for (const auto& t : tasks) {
      std::set<std::string> parent_outputs;
      for (const auto& p : t.parents) {
        auto it = by_id.find(p);
        if (it == by_id.end())
          throw make_error("dag", "task " + t.id + " references unknown parent " + p);
        for (const auto& o : it->second->outputs) parent_outputs.insert(o);
      }
      for (const auto& in : t.inputs)
        if (!initial_files.count(in) && !parent_outputs.count(in))
          throw make_error("dag", "task " + t.id + " input " + in +
                                      " is neither an initial file nor a parent output");
    }

    // Kahn's algorithm; leftover nodes mean a cycle.
    std::map<std::string, int> indegree;
    std::map<std::string, std::vector<std::string>> children;
    for (const auto& t : tasks) indegree[t.id] = static_cast<int>(t.parents.size());
    for (const auto& t : tasks)
      for (const auto& p : t.parents) children[p].push_back(t.id);
    std::vector<std::string> queue;
    for (const auto& [id, deg] : indegree)
      if (deg == 0) queue.push_back(id);
    std::size_t seen = 0;
    while (!queue.empty()) {
      const std::string id = queue.back();
      queue.pop_back();
      ++seen;
      for (const auto& c : children[id])
        if (--indegree[c] == 0) queue.push_back(c);
    }
    if (seen != tasks.size()) throw make_error("dag", "cycle detected");
  }
};

namespace dag_detail {

inline std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i];
  }
  return s;
}

inline std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace dag_detail

// DAG file: one task per line,
//   TASK <id> <transformation> mem=<mb> features=<a,b> parents=<id,id> in=<paths> out=<paths>
inline std::string serialize_dag(const Dag& dag) {
  std::string out;
  char buf[64];
  for (const auto& t : dag.tasks) {
    std::snprintf(buf, sizeof(buf), "%g", t.request_mem_mb);
    out += "TASK " + t.id + " " + t.transformation + " mem=" + buf +
           " features=" + dag_detail::join(t.required_features) +
           " parents=" + dag_detail::join(t.parents) + " in=" + dag_detail::join(t.inputs) +
           " out=" + dag_detail::join(t.outputs) + "\n";
  }
  return out;
}

inline void write_dag(const Dag& dag, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw make_error("write_dag", "cannot open " + path);
  out << serialize_dag(dag);
  if (!out) throw make_error("write_dag", "write failed for " + path);
}

inline Dag parse_dag(const std::string& text) {
  Dag dag;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string word;
    row >> word;
    if (word != "TASK")
      throw make_error("parse_dag", "expected TASK at line " + std::to_string(lineno));
    TaskSpec t;
    if (!(row >> t.id >> t.transformation))
      throw make_error("parse_dag", "missing id/transformation at line " + std::to_string(lineno));
    while (row >> word) {
      const auto eq = word.find('=');
      if (eq == std::string::npos)
        throw make_error("parse_dag", "expected key=value token: " + word);
      const std::string key = word.substr(0, eq), val = word.substr(eq + 1);
      if (key == "mem")
        t.request_mem_mb = std::stod(val);
      else if (key == "features")
        t.required_features = dag_detail::split_csv(val);
      else if (key == "parents")
        t.parents = dag_detail::split_csv(val);
      else if (key == "in")
        t.inputs = dag_detail::split_csv(val);
      else if (key == "out")
        t.outputs = dag_detail::split_csv(val);
      else
        throw make_error("parse_dag", "unknown token " + key + " at line " + std::to_string(lineno));
    }
    dag.tasks.push_back(std::move(t));
  }
  return dag;
}

inline Dag read_dag(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw make_error("read_dag", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_dag(ss.str());
}

/// Execution node: memory capacity, feature set, runtime multiplier.
struct NodeSpec {
  std::string id;
  double mem_mb = 0.0;
  std::vector<std::string> features;
  double speed_factor = 1.0;

  bool has_features(const std::vector<std::string>& required) const {
    for (const auto& f : required)
      if (std::find(features.begin(), features.end(), f) == features.end()) return false;
    return true;
  }
};

// Node pool file: NODE <id> mem=<mb> features=<a,b> speed=<f>
inline std::vector<NodeSpec> parse_nodes(const std::string& text) {
  std::vector<NodeSpec> nodes;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string word;
    row >> word;
    if (word != "NODE")
      throw make_error("parse_nodes", "expected NODE at line " + std::to_string(lineno));
    NodeSpec n;
    if (!(row >> n.id)) throw make_error("parse_nodes", "missing node id");
    while (row >> word) {
      const auto eq = word.find('=');
      if (eq == std::string::npos) throw make_error("parse_nodes", "expected key=value: " + word);
      const std::string key = word.substr(0, eq), val = word.substr(eq + 1);
      if (key == "mem")
        n.mem_mb = std::stod(val);
      else if (key == "features")
        n.features = dag_detail::split_csv(val);
      else if (key == "speed")
        n.speed_factor = std::stod(val);
      else
        throw make_error("parse_nodes", "unknown token " + key);
    }
    if (!(n.mem_mb > 0.0)) throw make_error("parse_nodes", "node " + n.id + " needs mem > 0");
    if (!(n.speed_factor > 0.0)) throw make_error("parse_nodes", "node " + n.id + " needs speed > 0");
    nodes.push_back(std::move(n));
  }
  if (nodes.empty()) throw make_error("parse_nodes", "empty node pool");
  return nodes;
}

inline std::vector<NodeSpec> read_nodes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw make_error("read_nodes", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_nodes(ss.str());
}

}  // namespace gwflow

#endif  // GWFLOW_DAG_HPP
