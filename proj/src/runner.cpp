#include "adaptsim/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "adaptsim/error.hpp"

namespace adaptsim {

namespace {

double median(std::vector<double> values) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

BatchReport run_compare_batch(const Scenario& scenario,
                              const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty())
    throw Error(ErrorCode::InvalidParam, "at least one seed required");
  BatchReport report;
  report.seeds = seeds;
  for (std::uint64_t seed : seeds) {
    Scenario adaptive = scenario;
    adaptive.seed = seed;
    adaptive.adaptive = true;
    Scenario fixed = adaptive;
    fixed.adaptive = false;
    report.per_seed.push_back(compare(run(adaptive), run(fixed)));
  }
  for (const auto& [node, first] : report.per_seed.front().nodes) {
    std::vector<double> st, ad, ds, dp;
    int positive = 0;
    for (const LifetimeReport& r : report.per_seed) {
      const NodeLifetime& lt = r.nodes.at(node);
      st.push_back(lt.alive_until_static);
      ad.push_back(lt.alive_until_adaptive);
      ds.push_back(lt.delta_seconds);
      dp.push_back(lt.delta_percent);
      if (lt.delta_seconds > 0) ++positive;
    }
    BatchNodeStats s;
    s.median_static = median(st);
    s.median_adaptive = median(ad);
    s.median_delta_seconds = median(ds);
    s.median_delta_percent = median(dp);
    s.fraction_positive = double(positive) / double(report.per_seed.size());
    report.stats[node] = s;
  }
  return report;
}

void write_trace_files(const SimTrace& trace, const std::string& out_dir,
                       const std::string& prefix) {
  std::filesystem::create_directories(out_dir);
  std::filesystem::path dir(out_dir);
  write_nodes_csv(trace, (dir / (prefix + "_nodes.csv")).string());
  write_links_csv(trace, (dir / (prefix + "_links.csv")).string());
  write_curves_csv(trace, (dir / (prefix + "_curves.csv")).string());
}

BatchReport run_compare_to_dir(const Scenario& scenario,
                               const std::vector<std::uint64_t>& seeds,
                               const std::string& out_dir,
                               bool export_traces) {
  std::filesystem::create_directories(out_dir);
  if (export_traces) {
    for (std::uint64_t seed : seeds) {
      Scenario adaptive = scenario;
      adaptive.seed = seed;
      adaptive.adaptive = true;
      Scenario fixed = adaptive;
      fixed.adaptive = false;
      std::string tag = "seed" + std::to_string(seed);
      write_trace_files(run(adaptive), out_dir, tag + "_adaptive");
      write_trace_files(run(fixed), out_dir, tag + "_static");
    }
  }
  BatchReport report = run_compare_batch(scenario, seeds);
  std::filesystem::path dir(out_dir);
  write_batch_report_csv(report, (dir / "lifetime_report.csv").string());
  std::ofstream txt(dir / "lifetime_report.txt");
  if (!txt) throw Error(ErrorCode::IoError, "cannot write lifetime report");
  txt << format_batch_report(report);
  return report;
}

std::string format_batch_report(const BatchReport& report) {
  std::ostringstream os;
  os << "lifetime comparison over " << report.seeds.size() << " seed(s)\n\n";
  os << "per-seed deltas (node: delta_s / delta_pct)\n";
  for (std::size_t i = 0; i < report.per_seed.size(); ++i) {
    os << "seed " << report.seeds[i] << ":";
    for (const auto& [node, lt] : report.per_seed[i].nodes)
      os << "  " << node << ": " << lt.delta_seconds << "s / "
         << lt.delta_percent << "%";
    os << "\n";
  }
  os << "\nmedians\n";
  os << "node  static_s  adaptive_s  delta_s  delta_pct  frac_positive\n";
  for (const auto& [node, s] : report.stats)
    os << node << "  " << s.median_static << "  " << s.median_adaptive << "  "
       << s.median_delta_seconds << "  " << s.median_delta_percent << "  "
       << s.fraction_positive << "\n";
  return os.str();
}

void write_batch_report_csv(const BatchReport& report,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << "seed,node,static_lifetime_s,adaptive_lifetime_s,delta_s,delta_pct\n";
  for (std::size_t i = 0; i < report.per_seed.size(); ++i)
    for (const auto& [node, lt] : report.per_seed[i].nodes)
      out << report.seeds[i] << ',' << node << ',' << lt.alive_until_static
          << ',' << lt.alive_until_adaptive << ',' << lt.delta_seconds << ','
          << lt.delta_percent << '\n';
  out << "median,node,static_lifetime_s,adaptive_lifetime_s,delta_s,delta_pct,"
         "frac_positive\n";
  for (const auto& [node, s] : report.stats)
    out << "median," << node << ',' << s.median_static << ','
        << s.median_adaptive << ',' << s.median_delta_seconds << ','
        << s.median_delta_percent << ',' << s.fraction_positive << '\n';
}

}  // namespace adaptsim
