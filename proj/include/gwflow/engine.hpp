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

#ifndef GWFLOW_ENGINE_HPP
#define GWFLOW_ENGINE_HPP

#include <algorithm>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gwflow/dag.hpp"
#include "gwflow/rng.hpp"
#include "gwflow/sha256.hpp"
#include "gwflow/types.hpp"

namespace gwflow {

enum class FailureReason { none, incompatible_node, memory_eviction, integrity_error, task_error };

inline const char* to_string(FailureReason r) {
  switch (r) {
    case FailureReason::none: return "none";
    case FailureReason::incompatible_node: return "incompatible_node";
    case FailureReason::memory_eviction: return "memory_eviction";
    case FailureReason::integrity_error: return "integrity_error";
    case FailureReason::task_error: return "task_error";
  }
  return "none";
}

inline FailureReason failure_reason_from(const std::string& s) {
  if (s == "none") return FailureReason::none;
  if (s == "incompatible_node") return FailureReason::incompatible_node;
  if (s == "memory_eviction") return FailureReason::memory_eviction;
  if (s == "integrity_error") return FailureReason::integrity_error;
  if (s == "task_error") return FailureReason::task_error;
  throw make_error("provenance", "unknown failure reason " + s);
}

/// One execution attempt of one task; times are virtual seconds.
struct AttemptRecord {
  std::string task_id;
  int attempt_no = 1;  // 1-based
  std::string node_id;
  double start_s = 0.0;
  double duration_s = 0.0;
  double peak_mem_mb = 0.0;
  bool success = false;
  FailureReason reason = FailureReason::none;
  int checksums_compared = 0;
  int checksums_generated = 0;
  int integrity_errors = 0;
  double compare_duration_s = 0.0;   // virtual time spent verifying inputs
  double generate_duration_s = 0.0;  // virtual time spent checksumming outputs
};

/// Listing-style aggregate statistics over a run.
struct RunReport {
  int tasks_succeeded = 0;
  int tasks_failed = 0;
  int tasks_incomplete = 0;
  int tasks_total = 0;
  long retries = 0;
  double workflow_wall_time_s = 0.0;
  double cumulative_job_wall_time_s = 0.0;
  double cumulative_badput_s = 0.0;
  long files_checksums_compared = 0;
  double checksums_compare_duration_s = 0.0;
  long files_checksums_generated = 0;
  double checksums_generate_duration_s = 0.0;
  long integrity_errors_total = 0;
  int failures_with_integrity_errors = 0;
};

// ---------------------------------------------------------------------------
// Matchmaking

/// What a task currently asks of a node (memory may have been escalated past
/// the TaskSpec's initial request).
struct ResourceRequest {
  double request_mem_mb = 0.0;
  std::vector<std::string> required_features;
};

struct Occupancy {
  std::vector<int> running_tasks;   // parallel to the node list
  std::vector<double> used_mem_mb;

  explicit Occupancy(std::size_t n_nodes = 0)
      : running_tasks(n_nodes, 0), used_mem_mb(n_nodes, 0.0) {}
};

/// Picks an execution node: eligible nodes carry every required feature and
/// have enough free memory; among those, the least-loaded wins, lowest node
/// id on ties. Returns nothing when no node qualifies (the task waits).
inline std::optional<std::size_t> matchmake(const ResourceRequest& req,
                                            const std::vector<NodeSpec>& nodes,
                                            const Occupancy& occ) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].has_features(req.required_features)) continue;
    if (nodes[i].mem_mb - occ.used_mem_mb[i] < req.request_mem_mb) continue;
    if (!best) {
      best = i;
      continue;
    }
    const int a = occ.running_tasks[i], b = occ.running_tasks[*best];
    if (a < b || (a == b && nodes[i].id < nodes[*best].id)) best = i;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Retry escalation

struct ExecPolicy {
  double escalation_factor = 2.0;
  double eviction_runtime_fraction = 0.5;  // evicted attempts burn this much of the nominal cost
  double mem_sigma = 0.25;                 // lognormal spread of the memory-need model
  int workers = 1;                         // real threads executing stage payloads
  double checksum_rate_mb_per_s = 200.0;   // virtual cost model for integrity work
  double checksum_overhead_s = 0.05;

  std::map<std::string, double> nominal_cost_s = {
      {"calculate_psd", 2050.0},  {"inspiral", 5150.0},
      {"hdf_trigger_merge", 3760.0}, {"statmap", 970.0},
      {"distribute_background_bins", 967.0}, {"plot_snrifar", 2046.0}};
  std::map<std::string, double> base_mem_mb = {
      {"calculate_psd", 700.0},  {"inspiral", 1500.0},
      {"hdf_trigger_merge", 700.0}, {"statmap", 3000.0},
      {"distribute_background_bins", 3000.0}, {"plot_snrifar", 1400.0}};

  // Override for the per-task true memory need; the default model is
  // base(transformation) * input-size factor * seeded lognormal.
  std::function<double(const TaskSpec&, std::uint64_t input_bytes, std::uint64_t seed)>
      memory_need_mb;

  // Fault injection: features a transformation needs but does not declare,
  // and output files to corrupt (once) after their producer completes.
  std::map<std::string, std::vector<std::string>> hidden_needs;
  std::set<std::string> corrupt_outputs;

  double nominal_cost(const std::string& transformation) const {
    auto it = nominal_cost_s.find(transformation);
    return it == nominal_cost_s.end() ? 1000.0 : it->second;
  }
  double base_mem(const std::string& transformation) const {
    auto it = base_mem_mb.find(transformation);
    return it == base_mem_mb.end() ? 512.0 : it->second;
  }
};

struct AttemptOutcome {
  FailureReason reason = FailureReason::none;
  double request_mem_mb = 0.0;
  std::vector<std::string> missing_features;
};

struct Escalation {
  double request_mem_mb = 0.0;
  std::vector<std::string> add_features;
};

/// Retry policy: evictions double (by default) the memory request; landing on
/// a node without a needed feature adds that feature to the declared
/// requirements; anything else retries unchanged.
inline Escalation escalate(const ExecPolicy& policy, const AttemptOutcome& last) {
  Escalation e;
  e.request_mem_mb = last.request_mem_mb;
  if (last.reason == FailureReason::memory_eviction)
    e.request_mem_mb = last.request_mem_mb * policy.escalation_factor;
  else if (last.reason == FailureReason::incompatible_node)
    e.add_features = last.missing_features;
  return e;
}

// ---------------------------------------------------------------------------
// Provenance serialization: one tab-separated line per attempt.

inline std::string render_provenance(const std::vector<AttemptRecord>& records) {
  std::string out;
  char buf[512];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf),
                  "%s\t%d\t%s\t%.3f\t%.3f\t%.2f\t%s\t%s\t%d\t%d\t%d\t%.6f\t%.6f\n",
                  r.task_id.c_str(), r.attempt_no, r.node_id.c_str(), r.start_s, r.duration_s,
                  r.peak_mem_mb, r.success ? "success" : "failed", to_string(r.reason),
                  r.checksums_compared, r.checksums_generated, r.integrity_errors,
                  r.compare_duration_s, r.generate_duration_s);
    out += buf;
  }
  return out;
}

inline std::vector<AttemptRecord> parse_provenance(const std::string& text) {
  std::vector<AttemptRecord> records;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::vector<std::string> f;
    std::string field;
    while (std::getline(row, field, '\t')) f.push_back(field);
    if (f.size() != 13) throw make_error("provenance", "expected 13 fields: " + line);
    AttemptRecord r;
    r.task_id = f[0];
    r.attempt_no = std::stoi(f[1]);
    r.node_id = f[2];
    r.start_s = std::stod(f[3]);
    r.duration_s = std::stod(f[4]);
    r.peak_mem_mb = std::stod(f[5]);
    if (f[6] == "success")
      r.success = true;
    else if (f[6] == "failed")
      r.success = false;
    else
      throw make_error("provenance", "unknown status " + f[6]);
    r.reason = failure_reason_from(f[7]);
    r.checksums_compared = std::stoi(f[8]);
    r.checksums_generated = std::stoi(f[9]);
    r.integrity_errors = std::stoi(f[10]);
    r.compare_duration_s = std::stod(f[11]);
    r.generate_duration_s = std::stod(f[12]);
    records.push_back(std::move(r));
  }
  return records;
}

// ---------------------------------------------------------------------------
// Execution

using StageFn = std::function<void(const TaskSpec&, const std::string& workspace)>;
using StageRegistry = std::map<std::string, StageFn>;

enum class TaskFinalState { succeeded, failed, incomplete };

struct ExecutionResult {
  RunReport report;
  std::vector<AttemptRecord> provenance;
  std::map<std::string, TaskFinalState> final_states;
  std::vector<std::string> diagnostics;
  bool all_succeeded = false;
};

namespace engine_detail {

class WorkerPool {
 public:
  explicit WorkerPool(int n) {
    for (int i = 0; i < std::max(1, n); ++i)
      threads_.emplace_back([this] { run(); });
  }
  ~WorkerPool() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

  std::future<void> submit(std::function<void()> fn) {
    auto task = std::make_shared<std::packaged_task<void()>>(std::move(fn));
    auto fut = task->get_future();
    {
      std::lock_guard<std::mutex> lock(mu_);
      queue_.push([task] { (*task)(); });
    }
    cv_.notify_one();
    return fut;
  }

 private:
  void run() {
    for (;;) {
      std::function<void()> job;
      {
        std::unique_lock<std::mutex> lock(mu_);
        cv_.wait(lock, [this] { return stop_ || !queue_.empty(); });
        if (stop_ && queue_.empty()) return;
        job = std::move(queue_.front());
        queue_.pop();
      }
      job();
    }
  }

  std::vector<std::thread> threads_;
  std::queue<std::function<void()>> queue_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool stop_ = false;
};

inline std::uint64_t file_size_bytes(const std::string& path) {
  std::error_code ec;
  const auto n = std::filesystem::file_size(path, ec);
  if (ec) throw make_error("engine", "cannot stat " + path);
  return static_cast<std::uint64_t>(n);
}

// Flip one payload byte in place; used by fault injection after the producer
// has recorded the file's checksum.
inline void corrupt_file_on_disk(const std::string& path) {
  std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
  if (!f) throw make_error("engine", "cannot corrupt " + path);
  f.seekg(0, std::ios::end);
  const auto size = static_cast<std::streamoff>(f.tellg());
  if (size <= 0) throw make_error("engine", "cannot corrupt empty file " + path);
  const std::streamoff pos = size / 2;
  f.seekg(pos);
  char c = 0;
  f.read(&c, 1);
  c = static_cast<char>(c ^ 0x01);
  f.seekp(pos);
  f.write(&c, 1);
}

}  // namespace engine_detail

/// Runs the DAG with virtual-time semantics: matchmaking against the node
/// pool, seeded memory-need simulation with eviction and retry escalation,
/// checksum verification of every consumed file, and per-attempt provenance.
/// Stage payloads execute for real on a pool of `policy.workers` threads;
/// everything recorded in the report and provenance derives from virtual
/// time and the seed, so results are independent of the worker count.
inline ExecutionResult execute(const Dag& dag, const std::vector<NodeSpec>& nodes,
                               const ExecPolicy& policy, std::uint64_t seed,
                               const StageRegistry& stages, const std::string& workspace,
                               const std::map<std::string, Sha256>& initial_checksums) {
  if (nodes.empty()) throw make_error("execute", "empty node pool");
  for (const auto& t : dag.tasks)
    if (!stages.count(t.transformation))
      throw make_error("execute", "no stage registered for " + t.transformation);

  // Producer lookup and initial-file universe.
  std::map<std::string, std::string> producer_of;  // output path -> task id
  std::set<std::string> task_outputs;
  for (const auto& t : dag.tasks)
    for (const auto& o : t.outputs) {
      producer_of[o] = t.id;
      task_outputs.insert(o);
    }
  std::set<std::string> initial_files;
  for (const auto& t : dag.tasks)
    for (const auto& in : t.inputs)
      if (!task_outputs.count(in)) initial_files.insert(in);
  dag.validate(initial_files);
  for (const auto& f : initial_files)
    if (!initial_checksums.count(f))
      throw make_error("execute", "missing checksum for initial file " + f);

  enum class S { pending, running, succeeded, failed };
  struct TaskState {
    const TaskSpec* spec = nullptr;
    S state = S::pending;
    int attempts = 0;
    double request_mem_mb = 0.0;
    std::vector<std::string> features;
  };
  std::map<std::string, TaskState> tasks;
  for (const auto& t : dag.tasks) {
    TaskState st;
    st.spec = &t;
    st.request_mem_mb = t.request_mem_mb;
    st.features = t.required_features;
    tasks.emplace(t.id, st);
  }

  std::map<std::string, Sha256> checksums = initial_checksums;
  std::set<std::string> corrupt_pending = policy.corrupt_outputs;

  struct Running {
    std::string task_id;
    std::size_t node = 0;
    double start = 0.0;
    double end = 0.0;
    double duration = 0.0;
    double peak_mem_mb = 0.0;
    bool planned_success = false;
    FailureReason planned_reason = FailureReason::none;
    std::vector<std::string> missing_features;
    std::vector<std::string> mismatched_inputs;
    int compared = 0;
    double compare_cost_s = 0.0;
    int integrity_errors = 0;
    std::future<void> payload;
  };
  auto running_after = [](const Running& a, const Running& b) {
    if (a.end != b.end) return a.end > b.end;
    return a.task_id > b.task_id;
  };
  std::vector<Running> running;  // heap by (end, task_id)

  Occupancy occ(nodes.size());
  engine_detail::WorkerPool pool(policy.workers);

  ExecutionResult result;
  RunReport& report = result.report;
  report.tasks_total = static_cast<int>(dag.tasks.size());
  double clock = 0.0;

  auto checksum_cost = [&](std::uint64_t bytes) {
    return policy.checksum_overhead_s +
           static_cast<double>(bytes) / (policy.checksum_rate_mb_per_s * 1024.0 * 1024.0);
  };
  auto full_path = [&](const std::string& rel) { return workspace + "/" + rel; };

  auto memory_need = [&](const TaskSpec& t) {
    std::uint64_t bytes = 0;
    for (const auto& in : t.inputs) bytes += engine_detail::file_size_bytes(full_path(in));
    if (policy.memory_need_mb) return policy.memory_need_mb(t, bytes, seed);
    GaussianStream g(derive_seed(seed, "wfengine.mem", t.id, 0));
    const double z = std::clamp(g.normal(), -3.5, 3.5);
    const double size_factor = 1.0 + static_cast<double>(bytes) / (1024.0 * 1024.0) / 1024.0;
    return policy.base_mem(t.transformation) * size_factor * std::exp(policy.mem_sigma * z);
  };

  // One scheduling pass: launch every ready task that matches a node.
  auto try_assign = [&]() {
    bool launched_any = false;
    for (;;) {
      bool launched = false;
      for (const auto& spec : dag.tasks) {
        TaskState& st = tasks.at(spec.id);
        if (st.state != S::pending) continue;
        bool parents_done = true;
        for (const auto& p : spec.parents)
          if (tasks.at(p).state != S::succeeded) {
            parents_done = false;
            break;
          }
        if (!parents_done) continue;

        const auto node = matchmake({st.request_mem_mb, st.features}, nodes, occ);
        if (!node) continue;

        Running run;
        run.task_id = spec.id;
        run.node = *node;
        run.start = clock;
        ++st.attempts;
        st.state = S::running;
        occ.running_tasks[*node] += 1;
        occ.used_mem_mb[*node] += st.request_mem_mb;

        // Node compatibility against undeclared needs (fault injection).
        std::vector<std::string> needed = st.features;
        if (auto it = policy.hidden_needs.find(spec.transformation);
            it != policy.hidden_needs.end())
          for (const auto& f : it->second)
            if (std::find(needed.begin(), needed.end(), f) == needed.end()) needed.push_back(f);
        std::vector<std::string> missing;
        for (const auto& f : needed)
          if (!nodes[*node].has_features({f})) missing.push_back(f);

        if (!missing.empty()) {
          run.planned_success = false;
          run.planned_reason = FailureReason::incompatible_node;
          run.missing_features = missing;
          run.duration = 0.0;
          run.end = clock;
        } else {
          // Verify every input checksum (virtual cost tracked separately).
          int mismatches = 0;
          for (const auto& in : spec.inputs) {
            const auto bytes = engine_detail::file_size_bytes(full_path(in));
            report.files_checksums_compared += 1;
            report.checksums_compare_duration_s += checksum_cost(bytes);
            run.compared += 1;
            run.compare_cost_s += checksum_cost(bytes);
            const Sha256 actual = sha256_file(full_path(in));
            // initial files come from the manifest, intermediate files are
            // recorded when their producer finishes
            auto it = checksums.find(in);
            if (it == checksums.end())
              throw make_error("execute", "no recorded checksum for input " + in);
            if (actual != it->second) {
              ++mismatches;
              run.mismatched_inputs.push_back(in);
            }
          }
          if (mismatches > 0) {
            run.planned_success = false;
            run.planned_reason = FailureReason::integrity_error;
            run.integrity_errors = mismatches;
            run.duration = 0.0;
            run.end = clock;
            report.integrity_errors_total += mismatches;
          } else {
            const double need = memory_need(spec);
            const double nominal =
                policy.nominal_cost(spec.transformation) * nodes[*node].speed_factor;
            if (need > st.request_mem_mb) {
              run.planned_success = false;
              run.planned_reason = FailureReason::memory_eviction;
              run.peak_mem_mb = st.request_mem_mb;  // killed at the granted ceiling
              run.duration = nominal * policy.eviction_runtime_fraction;
              run.end = clock + run.duration;
            } else {
              run.planned_success = true;
              run.peak_mem_mb = need;
              run.duration = nominal;
              run.end = clock + run.duration;
              const TaskSpec* spec_ptr = &spec;
              const StageFn* fn = &stages.at(spec.transformation);
              run.payload = pool.submit([spec_ptr, fn, workspace] { (*fn)(*spec_ptr, workspace); });
            }
          }
        }

        running.push_back(std::move(run));
        std::push_heap(running.begin(), running.end(), running_after);
        launched = true;
        launched_any = true;
        break;  // restart the scan: occupancy changed
      }
      if (!launched) break;
    }
    return launched_any;
  };

  auto handle_failure = [&](TaskState& st, const Running& run, FailureReason reason) {
    const AttemptOutcome outcome{reason, st.request_mem_mb, run.missing_features};
    const Escalation esc = escalate(policy, outcome);
    st.request_mem_mb = esc.request_mem_mb;
    for (const auto& f : esc.add_features)
      if (std::find(st.features.begin(), st.features.end(), f) == st.features.end())
        st.features.push_back(f);

    if (reason == FailureReason::integrity_error) {
      // Ask the producers of mismatched inputs to regenerate their outputs.
      for (const auto& in : run.mismatched_inputs) {
        auto prod = producer_of.find(in);
        if (prod != producer_of.end()) {
          TaskState& pstate = tasks.at(prod->second);
          if (pstate.state == S::succeeded) pstate.state = S::pending;
        }
      }
    }

    if (st.attempts > st.spec->max_retries) {
      st.state = S::failed;
    } else {
      st.state = S::pending;
    }
  };

  // Discrete-event loop over virtual time.
  for (;;) {
    try_assign();
    if (running.empty()) {
      bool any_pending = false;
      for (const auto& [id, st] : tasks)
        if (st.state == S::pending) any_pending = true;
      if (!any_pending) break;
      // Nothing runs and nothing can start: report why and stop.
      for (const auto& spec : dag.tasks) {
        const TaskState& st = tasks.at(spec.id);
        if (st.state != S::pending) continue;
        bool parents_done = true;
        for (const auto& p : spec.parents)
          if (tasks.at(p).state != S::succeeded) parents_done = false;
        if (!parents_done) continue;  // blocked by a failed ancestor
        const Occupancy empty(nodes.size());
        if (!matchmake({st.request_mem_mb, st.features}, nodes, empty)) {
          char buf[64];
          std::snprintf(buf, sizeof(buf), "%g", st.request_mem_mb);
          std::string feats;
          for (const auto& f : st.features) feats += (feats.empty() ? "" : ",") + f;
          result.diagnostics.push_back("no compatible resource for task " + spec.id +
                                       " (request " + buf + " MB, features [" + feats + "])");
        }
      }
      break;
    }

    std::pop_heap(running.begin(), running.end(), running_after);
    Running run = std::move(running.back());
    running.pop_back();
    clock = run.end;

    TaskState& st = tasks.at(run.task_id);
    occ.running_tasks[run.node] -= 1;
    occ.used_mem_mb[run.node] -= st.request_mem_mb;

    AttemptRecord rec;
    rec.task_id = run.task_id;
    rec.attempt_no = st.attempts;
    rec.node_id = nodes[run.node].id;
    rec.start_s = run.start;
    rec.duration_s = run.duration;
    rec.peak_mem_mb = run.peak_mem_mb;
    rec.checksums_compared = run.compared;
    rec.compare_duration_s = run.compare_cost_s;
    rec.integrity_errors = run.integrity_errors;

    bool success = run.planned_success;
    FailureReason reason = run.planned_reason;
    if (run.planned_success) {
      try {
        run.payload.get();
        // A stage that throws, or completes without writing a declared
        // output, fails the attempt as a task error.
        for (const auto& out : st.spec->outputs) engine_detail::file_size_bytes(full_path(out));
      } catch (const std::exception&) {
        success = false;
        reason = FailureReason::task_error;
      }
    }

    if (success) {
      st.state = S::succeeded;
      for (const auto& out : st.spec->outputs) {
        const auto bytes = engine_detail::file_size_bytes(full_path(out));
        checksums[out] = sha256_file(full_path(out));
        report.files_checksums_generated += 1;
        report.checksums_generate_duration_s += checksum_cost(bytes);
        rec.checksums_generated += 1;
        rec.generate_duration_s += checksum_cost(bytes);
        if (corrupt_pending.count(out)) {
          engine_detail::corrupt_file_on_disk(full_path(out));
          corrupt_pending.erase(out);
        }
      }
      rec.success = true;
      rec.reason = FailureReason::none;
    } else {
      rec.success = false;
      rec.reason = reason;
      handle_failure(st, run, reason);
    }

    report.cumulative_job_wall_time_s += run.duration;
    if (!success) report.cumulative_badput_s += run.duration;
    result.provenance.push_back(std::move(rec));
  }

  // Final accounting.
  report.workflow_wall_time_s = clock;
  std::set<std::string> attempted;
  for (const auto& r : result.provenance) attempted.insert(r.task_id);
  report.retries = static_cast<long>(result.provenance.size()) -
                   static_cast<long>(attempted.size());
  std::map<std::string, const AttemptRecord*> last_attempt;
  for (const auto& r : result.provenance) last_attempt[r.task_id] = &r;
  for (const auto& spec : dag.tasks) {
    const TaskState& st = tasks.at(spec.id);
    TaskFinalState fin;
    if (st.state == S::succeeded) {
      fin = TaskFinalState::succeeded;
      ++report.tasks_succeeded;
    } else if (st.state == S::failed) {
      fin = TaskFinalState::failed;
      ++report.tasks_failed;
      auto it = last_attempt.find(spec.id);
      if (it != last_attempt.end() && it->second->integrity_errors > 0)
        ++report.failures_with_integrity_errors;
    } else {
      fin = TaskFinalState::incomplete;
      ++report.tasks_incomplete;
    }
    result.final_states.emplace(spec.id, fin);
  }
  result.all_succeeded = report.tasks_succeeded == report.tasks_total;
  return result;
}

}  // namespace gwflow

#endif  // GWFLOW_ENGINE_HPP
