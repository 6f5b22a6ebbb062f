#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adaptsim.h"

namespace {

int exit_code(as_status status) {
  switch (status) {
    case AS_OK:
      return 0;
    case AS_EPARSE:
    case AS_EVALIDATION:
    case AS_EINVAL:
      return 2;
    default:
      return 1;
  }
}

int fail(as_status status) {
  std::fprintf(stderr, "error: %s\n", as_last_error());
  return exit_code(status);
}

struct ScenarioHandle {
  as_scenario* sc = nullptr;
  ~ScenarioHandle() { as_scenario_free(sc); }
};

int load(const std::string& path, const std::string& style,
         ScenarioHandle& handle) {
  as_status st = as_scenario_load(path.c_str(), &handle.sc);
  if (st != AS_OK) return fail(st);
  if (!style.empty()) {
    st = as_scenario_set_style(handle.sc, style.c_str());
    if (st != AS_OK) return fail(st);
  }
  return 0;
}

std::string default_out_dir() {
  const char* env = std::getenv("ADAPTSIM_OUT");
  return env ? env : "out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context-aware rate-adaptation simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string style;
  std::string out_dir = default_out_dir();
  std::uint64_t seed = 0;
  bool seed_set = false;
  int seed_count = 1;
  bool adaptive = false, static_mode = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario_path, "scenario file")->required();
    cmd->add_option("--style", style, "direct|mediated (overrides the file)");
  };

  CLI::App* validate = app.add_subcommand("validate", "check a scenario file");
  add_common(validate);

  CLI::App* run_cmd = app.add_subcommand("run", "run one simulation");
  add_common(run_cmd);
  run_cmd->add_option("--seed", seed, "RNG seed")->each([&](auto) {
    seed_set = true;
  });
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_flag("--adaptive", adaptive, "force adaptation on");
  run_cmd->add_flag("--static", static_mode, "force adaptation off");

  CLI::App* compare = app.add_subcommand(
      "compare", "adaptive vs static over one or more seeds");
  add_common(compare);
  compare->add_option("--seed", seed, "base seed")->each([&](auto) {
    seed_set = true;
  });
  compare->add_option("--seeds", seed_count, "number of seeds (base,base+1,..)")
      ->check(CLI::PositiveNumber);
  compare->add_option("--out", out_dir, "output directory");
  bool no_traces = false;
  compare->add_flag("--no-traces", no_traces, "skip per-run trace CSVs");

  CLI::App* export_dot =
      app.add_subcommand("export-dot", "write the refined graph as dot");
  add_common(export_dot);
  std::string dot_path = "graph.dot";
  export_dot->add_option("--out", dot_path, "dot file path");

  CLI11_PARSE(app, argc, argv);

  ScenarioHandle handle;
  if (int rc = load(scenario_path, style, handle)) return rc;

  if (validate->parsed()) {
    char buf[4096];
    size_t count = 0;
    as_status st = as_scenario_validate(handle.sc, buf, sizeof buf, &count);
    if (count > 0) {
      std::fprintf(stderr, "invalid graph:\n%s", buf);
      return 2;
    }
    if (st != AS_OK) return fail(st);
    std::printf("ok\n");
    return 0;
  }

  if (export_dot->parsed()) {
    as_status st = as_scenario_export_dot(handle.sc, dot_path.c_str());
    if (st != AS_OK) return fail(st);
    std::printf("wrote %s\n", dot_path.c_str());
    return 0;
  }

  if (seed_set) as_scenario_set_seed(handle.sc, seed);

  if (run_cmd->parsed()) {
    if (adaptive && static_mode) {
      std::fprintf(stderr, "error: --adaptive and --static conflict\n");
      return 2;
    }
    if (adaptive) as_scenario_set_adaptive(handle.sc, 1);
    if (static_mode) as_scenario_set_adaptive(handle.sc, 0);
    as_trace* trace = nullptr;
    as_status st = as_run(handle.sc, &trace);
    if (st != AS_OK) return fail(st);
    std::string base = out_dir + "/run";
    st = as_trace_write_nodes_csv(trace, (base + "_nodes.csv").c_str());
    if (st == AS_OK)
      st = as_trace_write_links_csv(trace, (base + "_links.csv").c_str());
    if (st == AS_OK)
      st = as_trace_write_curves_csv(trace, (base + "_curves.csv").c_str());
    as_trace_free(trace);
    if (st != AS_OK) return fail(st);
    std::printf("wrote %s_{nodes,links,curves}.csv\n", base.c_str());
    return 0;
  }

  // compare
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < seed_count; ++i) seeds.push_back(seed + i);
  as_report* report = nullptr;
  as_status st = as_compare(handle.sc, seeds.data(), seeds.size(),
                            out_dir.c_str(), no_traces ? 0 : 1, &report);
  if (st != AS_OK) return fail(st);
  std::vector<char> buf(1 << 16);
  as_report_summary(report, buf.data(), buf.size());
  std::printf("%s", buf.data());
  as_report_free(report);
  std::printf("wrote %s/lifetime_report.{txt,csv}\n", out_dir.c_str());
  return 0;
}
