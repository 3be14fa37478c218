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

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "gwflow/cli.hpp"

#include "helpers.hpp"

using namespace gwflow;

namespace {

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr,
            std::string* err = nullptr) {
  std::vector<const char*> argv = {"gwflow"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream captured_out, captured_err;
  auto* old_out = std::cout.rdbuf(captured_out.rdbuf());
  auto* old_err = std::cerr.rdbuf(captured_err.rdbuf());
  const int code = cli_main(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  if (out) *out = captured_out.str();
  if (err) *err = captured_err.str();
  return code;
}

// Reduced configuration: same structure as the demo, minutes become seconds.
std::string mini_config_text(std::uint64_t seed = 42) {
  std::ostringstream ini;
  ini << "[detectors]\nnames = H1,L1\nlight_travel_time_s = 0.010\n"
      << "[noise]\nkind = white\nsigma = 1.0\nsample_rate_hz = 1024\n"
      << "duration_s = 112\nstart_s = 0\n"
      << "[injections]\nenabled = true\nchirp_mass = 30.0\ncoalescence_time_s = 60.0\n"
      << "phase = 1.3\ntarget_snr = 18.0\ninter_detector_delay_s = 0.004\n"
      << "[bank]\nmc_min = 20.0\nmc_max = 45.0\nn_templates = 9\n"
      << "[search]\nf_low_hz = 20.0\nsegment_s = 64.0\nedge_s = 8.0\nsnr_threshold = 3.5\n"
      << "chisq_bins = 16\ncluster_window_s = 1.0\npsd_segment_s = 4.0\npsd_overlap = 0.5\n"
      << "psd_average = median\n"
      << "[coinc]\ntiming_slack_s = 0.005\nn_slides = 50\nslide_step_s = 0.1\n"
      << "hist_bin_width = 0.2\nbackground_bins = 1\nremove_loudest = false\n"
      << "[workflow]\npsd_parts = 2\nbank_parts = 1\nmax_retries = 5\n"
      << "escalation_factor = 2.0\nseed = " << seed << "\ninspiral_features = fma4\n";
  return ini.str();
}

std::string nodes_text() {
  return "NODE node00 mem=8192 features=fma4,avx2 speed=1.0\n"
         "NODE node01 mem=8192 features=fma4 speed=1.2\n"
         "NODE node02 mem=4096 features=avx2 speed=0.8\n"
         "NODE node03 mem=16384 features=fma4,avx2 speed=1.0\n";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text;
}

// One shared end-to-end run for all CLI checks that only read its outputs.
struct MiniRun {
  gwtest::TempDir dir{"cli_mini"};
  std::string config = dir.path() + "/mini.ini";
  std::string nodes = dir.path() + "/nodes.txt";
  std::string data = dir.path() + "/data";
  std::string out = dir.path() + "/out";
  int gen_code = -1, run_code = -1;
  std::string run_stdout;

  MiniRun() {
    write_file(config, mini_config_text());
    write_file(nodes, nodes_text());
    gen_code = run_cli({"gen-data", "--config", config, "--out", data});
    run_code = run_cli({"run", "--config", config, "--data", data, "--nodes", nodes, "--out",
                        out, "--workers", "2"},
                       &run_stdout);
  }
};

MiniRun& mini() {
  static MiniRun instance;
  return instance;
}

}  // namespace

TEST_CASE("config parsing enforces the schema") {
  gwtest::TempDir dir("cfg");
  const std::string path = dir.path() + "/c.ini";

  SECTION("the mini config parses with its stated values") {
    write_file(path, mini_config_text(77));
    const RunConfig cfg = parse_config(path);
    CHECK(cfg.detectors[0].tag == "H1");
    CHECK(cfg.detectors[1].tag == "L1");
    CHECK(cfg.sample_rate_hz == 1024.0);
    CHECK(cfg.n_templates == 9);
    CHECK(cfg.seed == 77);
    CHECK(cfg.n_segments() == 2);
    CHECK(cfg.livetime_s() == Catch::Approx(96.0));
    CHECK(cfg.coincidence_window_s() == Catch::Approx(0.015));
    CHECK(cfg.inspiral_features == std::vector<std::string>{"fma4"});
  }
  SECTION("unknown keys are named") {
    write_file(path, mini_config_text() + "[coinc]\nbogus = 1\n");
    CHECK_THROWS_WITH(parse_config(path), Catch::Matchers::ContainsSubstring("coinc.bogus"));
  }
  SECTION("unknown sections are named") {
    write_file(path, mini_config_text() + "[plotting]\nx = 1\n");
    CHECK_THROWS_WITH(parse_config(path), Catch::Matchers::ContainsSubstring("[plotting]"));
  }
  SECTION("module preconditions checked at parse time") {
    write_file(path, mini_config_text() + "[noise]\nsigma = 0\n");
    CHECK_THROWS_WITH(parse_config(path),
                      Catch::Matchers::ContainsSubstring("sigma must be positive"));
    write_file(path, mini_config_text() + "[search]\npsd_overlap = 0.95\n");
    CHECK_THROWS_WITH(parse_config(path), Catch::Matchers::ContainsSubstring("psd_overlap"));
    write_file(path, mini_config_text() + "[coinc]\nslide_step_s = 0.02\n");
    CHECK_THROWS_WITH(parse_config(path),
                      Catch::Matchers::ContainsSubstring("slides not independent"));
    write_file(path, mini_config_text() + "[search]\nsegment_s = 63\n");
    CHECK_THROWS_WITH(parse_config(path), Catch::Matchers::ContainsSubstring("power of two"));
  }
  SECTION("malformed lines are rejected") {
    write_file(path, "[noise]\nnot a key value pair\n");
    CHECK_THROWS_WITH(parse_config(path), Catch::Matchers::ContainsSubstring("key=value"));
  }
}

TEST_CASE("gen-data writes strain plus manifest deterministically") {
  gwtest::TempDir dir("gen");
  const std::string config = dir.path() + "/c.ini";
  write_file(config, mini_config_text());

  std::string out;
  CHECK(run_cli({"gen-data", "--config", config, "--out", dir.path() + "/d1"}, &out) == 0);
  CHECK(out.find("manifest.txt") != std::string::npos);
  const auto manifest = read_manifest(dir.path() + "/d1/manifest.txt");
  CHECK(manifest.size() == 2);
  CHECK(manifest.count("strain_H1.gwsd") == 1);
  CHECK(manifest.count("strain_L1.gwsd") == 1);

  SECTION("existing output needs --force") {
    std::string err;
    CHECK(run_cli({"gen-data", "--config", config, "--out", dir.path() + "/d1"}, nullptr, &err) ==
          kExitBadInput);
    CHECK(err.find("--force") != std::string::npos);
    CHECK(run_cli({"gen-data", "--config", config, "--out", dir.path() + "/d1", "--force"}) == 0);
  }
  SECTION("same seed, same bytes") {
    CHECK(run_cli({"gen-data", "--config", config, "--out", dir.path() + "/d2"}) == 0);
    CHECK(gwtest::slurp(dir.path() + "/d1/manifest.txt") ==
          gwtest::slurp(dir.path() + "/d2/manifest.txt"));
    CHECK(gwtest::slurp(dir.path() + "/d1/strain_H1.gwsd") ==
          gwtest::slurp(dir.path() + "/d2/strain_H1.gwsd"));
  }
  SECTION("a different seed changes the data") {
    CHECK(run_cli({"gen-data", "--config", config, "--out", dir.path() + "/d3", "--seed",
                   "777"}) == 0);
    CHECK(gwtest::slurp(dir.path() + "/d1/strain_H1.gwsd") !=
          gwtest::slurp(dir.path() + "/d3/strain_H1.gwsd"));
  }
}

TEST_CASE("plan is idempotent and strict about its config") {
  gwtest::TempDir dir("plan");
  const std::string config = dir.path() + "/c.ini";
  write_file(config, mini_config_text());

  CHECK(run_cli({"plan", "--config", config, "--out", dir.path() + "/dag.txt"}) == 0);
  CHECK(run_cli({"plan", "--config", config, "--out", dir.path() + "/dag2.txt"}) == 0);
  CHECK(gwtest::slurp(dir.path() + "/dag.txt") == gwtest::slurp(dir.path() + "/dag2.txt"));

  const Dag dag = read_dag(dir.path() + "/dag.txt");
  CHECK(dag.tasks.size() == 12);  // 4 psd + 4 inspiral + 2 merge + statmap + plot

  std::string err;
  write_file(config, mini_config_text() + "[bank]\nwrong_key = 3\n");
  CHECK(run_cli({"plan", "--config", config, "--out", dir.path() + "/dag3.txt"}, nullptr,
                &err) == kExitBadInput);
  CHECK(err.find("bank.wrong_key") != std::string::npos);
}

TEST_CASE("usage errors exit with code 1") {
  std::string err;
  CHECK(run_cli({"plan"}, nullptr, &err) == kExitUsage);  // missing required flags
  CHECK(run_cli({"no-such-command"}, nullptr, &err) == kExitUsage);
  std::string out;
  CHECK(run_cli({"--help"}, &out) == kExitOk);
  CHECK(out.find("gen-data") != std::string::npos);
}

TEST_CASE("the reduced pipeline runs end to end") {
  const MiniRun& m = mini();
  REQUIRE(m.gen_code == 0);
  REQUIRE(m.run_code == 0);

  for (const char* f : {"results.txt", "hist.csv", "hist.svg", "provenance.tsv", "report.txt"})
    CHECK(std::filesystem::exists(m.out + "/" + f));

  CHECK(m.run_stdout.find("Cumulative job badput wall time") != std::string::npos);
  CHECK(m.run_stdout.find("loudest event") != std::string::npos);
  // the demo injection is louder than every background event, so the
  // summary reports a lower bound: "significance > X.XX<sigma> (lower bound)"
  CHECK(m.run_stdout.find("significance > ") != std::string::npos);
  CHECK(m.run_stdout.find("σ (lower bound)") != std::string::npos);

  const CoincResults res = read_results(m.out + "/results.txt");
  REQUIRE_FALSE(res.foreground.empty());
  std::size_t loudest = 0;
  for (std::size_t i = 1; i < res.foreground_stats.size(); ++i)
    if (res.foreground_stats[i].combined_stat > res.foreground_stats[loudest].combined_stat)
      loudest = i;
  // the injection is recovered on the matching template near its time
  CHECK(res.foreground[loudest].trigger_h.template_id == 4);
  CHECK(res.foreground[loudest].trigger_h.end_time_s == Catch::Approx(60.0).margin(0.01));
  CHECK(res.foreground[loudest].combined_stat > 20.0);
}

TEST_CASE("rerunning with the same seed reproduces results byte for byte") {
  const MiniRun& m = mini();
  REQUIRE(m.run_code == 0);
  gwtest::TempDir dir("rerun");
  const std::string out2 = dir.path() + "/out2";
  CHECK(run_cli({"run", "--config", m.config, "--data", m.data, "--nodes", m.nodes, "--out",
                 out2, "--workers", "1"}) == 0);
  CHECK(gwtest::slurp(m.out + "/results.txt") == gwtest::slurp(out2 + "/results.txt"));
  CHECK(gwtest::slurp(m.out + "/provenance.tsv") == gwtest::slurp(out2 + "/provenance.tsv"));
  CHECK(gwtest::slurp(m.out + "/report.txt") == gwtest::slurp(out2 + "/report.txt"));
  CHECK(gwtest::slurp(m.out + "/hist.csv") == gwtest::slurp(out2 + "/hist.csv"));
}

TEST_CASE("a pool without the required feature holds the filtering tasks") {
  const MiniRun& m = mini();
  gwtest::TempDir dir("nofma");
  const std::string nodes = dir.path() + "/nodes.txt";
  write_file(nodes, "NODE weak0 mem=8192 features=avx2 speed=1.0\n");
  std::string err;
  const int code = run_cli({"run", "--config", m.config, "--data", m.data, "--nodes", nodes,
                            "--out", dir.path() + "/out"},
                           nullptr, &err);
  CHECK(code == kExitExecution);
  CHECK(err.find("no compatible resource") != std::string::npos);
}

TEST_CASE("hist renders CSV and SVG from a results file") {
  const MiniRun& m = mini();
  gwtest::TempDir dir("hist");

  SECTION("the default bin width is 0.2") {
    std::string out;
    CHECK(run_cli({"hist", "--results", m.out + "/results.txt", "--csv",
                   dir.path() + "/h.csv"},
                  &out) == 0);
    std::ifstream csv(dir.path() + "/h.csv");
    std::string header, row1, row2;
    std::getline(csv, header);
    CHECK(header == "bin_left,fg_count,mean_bg_per_trial");
    std::getline(csv, row1);
    std::getline(csv, row2);
    const double left1 = std::stod(row1.substr(0, row1.find(',')));
    const double left2 = std::stod(row2.substr(0, row2.find(',')));
    CHECK(left2 - left1 == Catch::Approx(0.2));
  }

  SECTION("fixture counts match hand arithmetic") {
    // 3 bins from 8.0: foreground 8.05 and 8.30 -> bins 0 and 1;
    // 20 background events at 8.45 over 10 slides -> mean 2.0 in bin 2
    std::string fixture = "# meta n_slides=10 background_time_s=1000 foreground_time_s=100\n";
    fixture += "[foreground]\n";
    fixture +=
        "template_id,end_time_h_s,end_time_l_s,dt_s,combined_stat,far_per_s,p_value,sigma,is_lower_bound\n";
    fixture += "0,1.0,1.0,0.0,8.05,0.001,0.01,2.3,0\n";
    fixture += "0,2.0,2.0,0.0,8.30,0.001,0.01,2.3,0\n";
    fixture += "[background]\ncombined_stat,slide_index\n";
    for (int i = 0; i < 20; ++i) fixture += "8.45," + std::to_string(1 + i % 10) + "\n";
    write_file(dir.path() + "/fix.txt", fixture);

    CHECK(run_cli({"hist", "--results", dir.path() + "/fix.txt", "--csv", dir.path() + "/f.csv",
                   "--min", "8.0", "--max", "8.6"}) == 0);
    const std::string csv = gwtest::slurp(dir.path() + "/f.csv");
    CHECK(csv == "bin_left,fg_count,mean_bg_per_trial\n8,1,0\n8.2,1,0\n8.4,0,2\n");
  }

  SECTION("empty results render valid empty-axes SVG") {
    std::string fixture = "# meta n_slides=10 background_time_s=1000 foreground_time_s=100\n";
    fixture += "[foreground]\n";
    fixture +=
        "template_id,end_time_h_s,end_time_l_s,dt_s,combined_stat,far_per_s,p_value,sigma,is_lower_bound\n";
    fixture += "[background]\ncombined_stat,slide_index\n";
    write_file(dir.path() + "/empty.txt", fixture);
    CHECK(run_cli({"hist", "--results", dir.path() + "/empty.txt", "--csv",
                   dir.path() + "/e.csv", "--svg", dir.path() + "/e.svg"}) == 0);
    const std::string svg = gwtest::slurp(dir.path() + "/e.svg");
    CHECK(gwtest::xml_well_formed(svg));
    CHECK(svg.find("fg-marker") == std::string::npos);
  }

  SECTION("missing results exit 2") {
    CHECK(run_cli({"hist", "--results", dir.path() + "/nope.txt", "--csv",
                   dir.path() + "/h.csv"}) == kExitBadInput);
  }
}

TEST_CASE("the SVG is well-formed with one marker per occupied bin") {
  const MiniRun& m = mini();
  const std::string svg = gwtest::slurp(m.out + "/hist.svg");
  CHECK(gwtest::xml_well_formed(svg));

  // count occupied foreground bins in the CSV
  std::ifstream csv(m.out + "/hist.csv");
  std::string line;
  std::getline(csv, line);  // header
  int occupied = 0;
  while (std::getline(csv, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (std::stoi(line.substr(c1 + 1, c2 - c1 - 1)) > 0) ++occupied;
  }
  int markers = 0;
  for (std::size_t pos = svg.find("fg-marker"); pos != std::string::npos;
       pos = svg.find("fg-marker", pos + 1))
    ++markers;
  CHECK(markers == occupied);
  CHECK(occupied > 0);

  // the top axis carries sigma annotations computed from the background
  CHECK(svg.find("&#963;") != std::string::npos);
}

TEST_CASE("stats reproduces the report from the provenance log") {
  const MiniRun& m = mini();
  std::string out;
  CHECK(run_cli({"stats", "--provenance", m.out + "/provenance.tsv"}, &out) == 0);
  CHECK(out.find("Cumulative job badput wall time") != std::string::npos);
  CHECK(out.find("calculate_psd") != std::string::npos);
  CHECK(out.find("inspiral") != std::string::npos);

  std::string by_runtime;
  CHECK(run_cli({"stats", "--provenance", m.out + "/provenance.tsv", "--by", "runtime"},
                &by_runtime) == 0);
  CHECK(by_runtime.find("Transformation") != std::string::npos);

  CHECK(run_cli({"stats", "--provenance", m.out + "/missing.tsv"}) == kExitBadInput);

  // supplying the DAG restores the true task universe for the report
  gwtest::TempDir dir("statsdag");
  REQUIRE(run_cli({"plan", "--config", m.config, "--out", dir.path() + "/dag.txt"}) == 0);
  std::string with_dag;
  CHECK(run_cli({"stats", "--provenance", m.out + "/provenance.tsv", "--dag",
                 dir.path() + "/dag.txt"},
                &with_dag) == 0);
  CHECK(with_dag.find("Tasks          12") != std::string::npos);
}

TEST_CASE("background binning and fault injection work through the CLI") {
  const MiniRun& m = mini();
  gwtest::TempDir dir("faults");
  const std::string config = dir.path() + "/c.ini";
  // two background bins, one corrupted intermediate, one undeclared need
  write_file(config, mini_config_text() +
                         "[coinc]\nbackground_bins = 2\n"
                         "[workflow]\ncorrupt_file = psd_H1_part0.csv\n"
                         "hidden_feature = inspiral:avx2\n");
  const std::string nodes = dir.path() + "/nodes.txt";
  write_file(nodes,
             "NODE node_x mem=8192 features=fma4 speed=1.0\n"
             "NODE node_y mem=8192 features=fma4,avx2 speed=1.0\n");

  const std::string out = dir.path() + "/out";
  std::string run_out;
  REQUIRE(run_cli({"run", "--config", config, "--data", m.data, "--nodes", nodes, "--out",
                   out},
                  &run_out) == 0);

  // the binned results drive the histogram
  CHECK(std::filesystem::exists(out + "/results_binned.txt"));
  CHECK(std::filesystem::exists(out + "/hist.csv"));
  const CoincResults res = read_results(out + "/results_binned.txt");
  CHECK_FALSE(res.foreground.empty());

  // the corrupted PSD part was detected once and repaired
  CHECK(run_out.find("A total of 1 integrity errors encountered") != std::string::npos);
  CHECK(run_out.find("Failures: 0 job failures had integrity errors") != std::string::npos);

  // the undeclared feature caused at least one incompatible-node retry
  const std::string prov = gwtest::slurp(out + "/provenance.tsv");
  CHECK(prov.find("incompatible_node") != std::string::npos);
  CHECK(prov.find("node_y") != std::string::npos);
}

TEST_CASE("the demo config file is valid and matches its comments") {
  const RunConfig cfg = parse_config(std::string(GWFLOW_SOURCE_DIR) + "/configs/demo.ini");
  CHECK(cfg.hist_bin_width == 0.2);
  CHECK(cfg.n_slides == 200);
  CHECK(cfg.duration_s == 256.0);
  CHECK(cfg.sample_rate_hz == 4096.0);
  // the bank really does contain the injected chirp mass
  const auto bank = build_bank(cfg.mc_min, cfg.mc_max, cfg.n_templates, cfg.f_low_hz);
  bool hit = false;
  for (const auto& t : bank)
    if (std::abs(t.chirp_mass - cfg.injection.chirp_mass) < 1e-9) hit = true;
  CHECK(hit);
  const auto nodes = read_nodes(std::string(GWFLOW_SOURCE_DIR) + "/configs/nodes.txt");
  CHECK(nodes.size() == 4);
}
