#ifndef ADAPTSIM_RUNNER_HPP
#define ADAPTSIM_RUNNER_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "adaptsim/sim_engine.hpp"

namespace adaptsim {

struct BatchNodeStats {
  double median_static = 0;
  double median_adaptive = 0;
  double median_delta_seconds = 0;
  double median_delta_percent = 0;
  double fraction_positive = 0;  // seeds with delta_seconds > 0
};

struct BatchReport {
  std::vector<std::uint64_t> seeds;
  std::vector<LifetimeReport> per_seed;
  std::map<std::string, BatchNodeStats> stats;
};

/// Runs one (adaptive, static) pair per seed on copies of the scenario
/// and aggregates per-node medians.
BatchReport run_compare_batch(const Scenario& scenario,
                              const std::vector<std::uint64_t>& seeds);

/// Writes per-run trace CSVs for the given seed. Emitted files are
/// <prefix>_nodes.csv, <prefix>_links.csv, <prefix>_curves.csv.
void write_trace_files(const SimTrace& trace, const std::string& out_dir,
                       const std::string& prefix);

/// compare mode artifacts: both trace sets, per-seed report rows and the
/// aggregated summary. Returns the batch report.
BatchReport run_compare_to_dir(const Scenario& scenario,
                               const std::vector<std::uint64_t>& seeds,
                               const std::string& out_dir,
                               bool export_traces);

std::string format_batch_report(const BatchReport& report);
void write_batch_report_csv(const BatchReport& report,
                            const std::string& path);

}  // namespace adaptsim

#endif
