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

#ifndef GWFLOW_CLI_HPP
#define GWFLOW_CLI_HPP

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gwflow/config.hpp"
#include "gwflow/engine.hpp"
#include "gwflow/plan.hpp"
#include "gwflow/report.hpp"
#include "gwflow/stages.hpp"

namespace gwflow {

// Exit codes: 0 success, 1 usage error, 2 missing/invalid input,
// 3 execution failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitExecution = 3;

namespace cli_detail {

namespace fs = std::filesystem;

inline RunConfig load_config(const std::string& path, std::optional<std::uint64_t> seed) {
  if (!fs::exists(path)) throw make_error("config", "cannot open " + path);
  RunConfig cfg = parse_config(path);
  if (seed) {
    cfg.seed = *seed;
    cfg.validate();
  }
  return cfg;
}

inline int cmd_gen_data(const std::string& config_path, const std::string& out_dir,
                        std::optional<std::uint64_t> seed, bool force) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path, seed);
    fs::create_directories(out_dir);
    if (fs::exists(out_dir + "/manifest.txt") && !force)
      throw make_error("gen-data", "output already exists in " + out_dir + " (use --force)");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  try {
    const auto manifest = generate_data(cfg, out_dir);
    for (const auto& [path, sha] : manifest)
      std::cout << path << "  sha256=" << to_hex(sha) << "\n";
    std::cout << "wrote " << manifest.size() << " strain files and manifest.txt to " << out_dir
              << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitExecution;
  }
}

inline int cmd_plan(const std::string& config_path, const std::string& out_path,
                    std::optional<std::uint64_t> seed) {
  try {
    const RunConfig cfg = load_config(config_path, seed);
    const Dag dag = plan(cfg);
    write_dag(dag, out_path);
    std::cout << "planned " << dag.tasks.size() << " tasks -> " << out_path << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
}

inline int cmd_run(const std::string& config_path, const std::string& data_dir,
                   const std::string& nodes_path, const std::string& out_dir,
                   std::optional<std::uint64_t> seed, int workers) {
  RunConfig cfg;
  Dag dag;
  std::vector<NodeSpec> nodes;
  std::map<std::string, Sha256> manifest;
  try {
    cfg = load_config(config_path, seed);
    nodes = read_nodes(nodes_path);
    manifest = read_manifest(data_dir + "/manifest.txt");
    dag = plan(cfg);
    fs::create_directories(out_dir);
    for (const auto& [rel, sha] : manifest) {
      if (!fs::exists(data_dir + "/" + rel))
        throw make_error("run", "manifest names missing file " + rel);
      fs::copy_file(data_dir + "/" + rel, out_dir + "/" + rel,
                    fs::copy_options::overwrite_existing);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }

  try {
    ExecPolicy policy;
    policy.escalation_factor = cfg.escalation_factor;
    policy.workers = workers;
    for (const auto& [transformation, feature] : cfg.hidden_feature)
      policy.hidden_needs[transformation].push_back(feature);
    if (!cfg.corrupt_file.empty()) policy.corrupt_outputs.insert(cfg.corrupt_file);

    const StageRegistry stages = make_stage_registry(cfg);
    const ExecutionResult result =
        execute(dag, nodes, policy, cfg.seed, stages, out_dir, manifest);

    {
      std::ofstream prov(out_dir + "/provenance.tsv", std::ios::trunc);
      prov << render_provenance(result.provenance);
    }
    const std::string report_text = render_report(result.report);
    {
      std::ofstream rep(out_dir + "/report.txt", std::ios::trunc);
      rep << report_text;
    }
    std::cout << report_text;

    if (fs::exists(out_dir + "/" + kResultsPath)) {
      const std::string results_rel =
          fs::exists(out_dir + "/" + kBinnedResultsPath) ? kBinnedResultsPath : kResultsPath;
      const CoincResults res = read_results(out_dir + "/" + results_rel);
      if (!res.foreground_stats.empty()) {
        std::size_t loudest = 0;
        for (std::size_t i = 1; i < res.foreground_stats.size(); ++i)
          if (res.foreground_stats[i].combined_stat >
              res.foreground_stats[loudest].combined_stat)
            loudest = i;
        const auto& s = res.foreground_stats[loudest];
        char buf[256];
        std::snprintf(buf, sizeof(buf),
                      "\nloudest event: stat=%.4f far=%.6g /s p=%.6g significance %s%.2fσ%s\n",
                      s.combined_stat, s.far_per_s, s.p_value, s.is_lower_bound ? "> " : "",
                      s.sigma, s.is_lower_bound ? " (lower bound)" : "");
        std::cout << buf;
      } else {
        std::cout << "\nno foreground coincidences\n";
      }
    }

    for (const auto& d : result.diagnostics) std::cerr << d << "\n";
    if (!result.all_succeeded) {
      std::cerr << "error: " << result.report.tasks_failed << " failed, "
                << result.report.tasks_incomplete << " incomplete\n";
      return kExitExecution;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitExecution;
  }
}

inline int cmd_hist(const std::string& results_path, double bin_width, const std::string& csv_path,
                    const std::string& svg_path, double range_lo, double range_hi) {
  CoincResults res;
  try {
    if (!fs::exists(results_path)) throw make_error("hist", "cannot open " + results_path);
    res = read_results(results_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  try {
    auto [hist, ticks] = histogram_from_results(res, bin_width, range_lo, range_hi);
    write_histogram_csv(hist, csv_path);
    if (!svg_path.empty()) {
      std::ofstream svg(svg_path, std::ios::trunc);
      if (!svg) throw make_error("hist", "cannot open " + svg_path);
      svg << render_histogram_svg(hist, ticks);
    }
    std::cout << "histogram: " << hist.bins.size() << " bins of width " << bin_width << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitExecution;
  }
}

inline int cmd_stats(const std::string& provenance_path, const std::string& by,
                     const std::string& dag_path) {
  try {
    if (!fs::exists(provenance_path))
      throw make_error("stats", "cannot open " + provenance_path);
    std::ifstream in(provenance_path);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto records = parse_provenance(ss.str());
    int tasks_total = 0;
    if (!dag_path.empty()) {
      if (!fs::exists(dag_path)) throw make_error("stats", "cannot open " + dag_path);
      tasks_total = static_cast<int>(read_dag(dag_path).tasks.size());
    }
    std::cout << render_report(report_from_provenance(records, tasks_total)) << "\n";
    const auto sort = by == "runtime" ? SummarySort::by_max_runtime : SummarySort::by_max_memory;
    std::cout << render_transformation_table(summarize_transformations(records, sort));
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
}

}  // namespace cli_detail

inline int cli_main(int argc, const char* const* argv) {
  CLI::App app{"desk-scale two-detector matched-filter search with a fault-tolerant "
               "workflow engine"};
  app.require_subcommand(1);

  std::string config_path, out_path, data_dir, nodes_path, results_path, csv_path, svg_path;
  std::string provenance_path, dag_path, by = "memory";
  std::optional<std::uint64_t> seed;
  bool force = false;
  int workers = 2;
  double bin_width = 0.2, range_lo = 0.0, range_hi = 0.0;

  auto* gen = app.add_subcommand("gen-data", "generate synthetic strain files and a manifest");
  gen->add_option("--config", config_path, "analysis configuration (INI)")->required();
  gen->add_option("--out", out_path, "output directory")->required();
  gen->add_option("--seed", seed, "master seed (overrides the config)");
  gen->add_flag("--force", force, "overwrite an existing output directory");

  auto* plan_cmd = app.add_subcommand("plan", "plan the pipeline DAG");
  plan_cmd->add_option("--config", config_path, "analysis configuration (INI)")->required();
  plan_cmd->add_option("--out", out_path, "DAG file to write")->required();
  plan_cmd->add_option("--seed", seed, "master seed (overrides the config)");

  auto* run = app.add_subcommand("run", "execute the full pipeline");
  run->add_option("--config", config_path, "analysis configuration (INI)")->required();
  run->add_option("--data", data_dir, "directory from gen-data")->required();
  run->add_option("--nodes", nodes_path, "node pool file")->required();
  run->add_option("--out", out_path, "output directory")->required();
  run->add_option("--seed", seed, "master seed (overrides the config)");
  run->add_option("--workers", workers, "worker threads for stage payloads")
      ->default_val(2);

  auto* hist = app.add_subcommand("hist", "render the significance histogram");
  hist->add_option("--results", results_path, "results file from a run")->required();
  hist->add_option("--bin-width", bin_width, "histogram bin width")->default_val(0.2);
  hist->add_option("--seed", seed, "accepted for interface uniformity; hist is deterministic");
  hist->add_option("--csv", csv_path, "histogram CSV to write")->required();
  hist->add_option("--svg", svg_path, "histogram SVG to write");
  hist->add_option("--min", range_lo, "left edge of the histogram range");
  hist->add_option("--max", range_hi, "right edge of the histogram range");

  auto* stats = app.add_subcommand("stats", "render run statistics from a provenance log");
  stats->add_option("--provenance", provenance_path, "provenance log (TSV)")->required();
  stats->add_option("--by", by, "transformation table sort key")
      ->check(CLI::IsMember({"memory", "runtime"}))
      ->default_val("memory");
  stats->add_option("--dag", dag_path, "DAG file, for the incomplete-task count");
  stats->add_option("--seed", seed, "accepted for interface uniformity; stats is deterministic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (gen->parsed()) return cli_detail::cmd_gen_data(config_path, out_path, seed, force);
  if (plan_cmd->parsed()) return cli_detail::cmd_plan(config_path, out_path, seed);
  if (run->parsed())
    return cli_detail::cmd_run(config_path, data_dir, nodes_path, out_path, seed, workers);
  if (hist->parsed())
    return cli_detail::cmd_hist(results_path, bin_width, csv_path, svg_path, range_lo, range_hi);
  if (stats->parsed()) return cli_detail::cmd_stats(provenance_path, by, dag_path);
  return kExitUsage;
}

}  // namespace gwflow

#endif  // GWFLOW_CLI_HPP
