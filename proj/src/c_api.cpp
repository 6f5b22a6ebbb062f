#include "adaptsim.h"

#include <cstring>
#include <fstream>
#include <string>

#include "adaptsim/error.hpp"
#include "adaptsim/runner.hpp"
#include "adaptsim/scenario_io.hpp"

using namespace adaptsim;

struct as_scenario {
  Scenario scenario;
};

struct as_trace {
  SimTrace trace;
};

struct as_report {
  BatchReport report;
};

namespace {

thread_local std::string g_last_error;

as_status status_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
      return AS_EPARSE;
    case ErrorCode::ScenarioError:
    case ErrorCode::InvalidProfile:
      return AS_EVALIDATION;
    case ErrorCode::IoError:
      return AS_EIO;
    case ErrorCode::InvalidParam:
    case ErrorCode::OutOfDomain:
    case ErrorCode::UnknownNode:
    case ErrorCode::DuplicateNode:
      return AS_EINVAL;
    default:
      return AS_ERUNTIME;
  }
}

template <typename Fn>
as_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return AS_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return AS_ERUNTIME;
  }
}

void copy_out(const std::string& s, char* buf, size_t cap) {
  if (!buf || cap == 0) return;
  size_t n = std::min(cap - 1, s.size());
  std::memcpy(buf, s.data(), n);
  buf[n] = '\0';
}

}  // namespace

extern "C" {

const char* as_last_error(void) { return g_last_error.c_str(); }

as_status as_scenario_load(const char* path, as_scenario** out) {
  if (!path || !out) {
    g_last_error = "null argument";
    return AS_EINVAL;
  }
  return guarded([&] { *out = new as_scenario{load_scenario(path)}; });
}

void as_scenario_free(as_scenario* sc) { delete sc; }

as_status as_scenario_set_seed(as_scenario* sc, uint64_t seed) {
  if (!sc) return AS_EINVAL;
  sc->scenario.seed = seed;
  return AS_OK;
}

as_status as_scenario_set_adaptive(as_scenario* sc, int adaptive) {
  if (!sc) return AS_EINVAL;
  sc->scenario.adaptive = adaptive != 0;
  return AS_OK;
}

as_status as_scenario_set_style(as_scenario* sc, const char* style) {
  if (!sc || !style) return AS_EINVAL;
  std::string s(style);
  return guarded([&] {
    if (s == "direct")
      apply_style(sc->scenario, StyleChoice::Direct);
    else if (s == "mediated")
      apply_style(sc->scenario, StyleChoice::Mediated);
    else
      throw Error(ErrorCode::InvalidParam, "style must be direct or mediated");
  });
}

as_status as_scenario_validate(const as_scenario* sc, char* buf, size_t cap,
                               size_t* count) {
  if (!sc || !count) return AS_EINVAL;
  return guarded([&] {
    auto violations = validate(sc->scenario.graph);
    *count = violations.size();
    std::string text;
    for (const Violation& v : violations)
      text += v.invariant + ": " + v.element + "\n";
    copy_out(text, buf, cap);
    sc->scenario.check();  // full constraint check beyond graph shape
  });
}

as_status as_scenario_export_dot(const as_scenario* sc, const char* path) {
  if (!sc || !path) return AS_EINVAL;
  return guarded([&] {
    std::ofstream out(path);
    if (!out)
      throw Error(ErrorCode::IoError, "cannot write '" + std::string(path) + "'");
    out << to_dot(sc->scenario.graph);
  });
}

as_status as_run(const as_scenario* sc, as_trace** out) {
  if (!sc || !out) return AS_EINVAL;
  return guarded([&] { *out = new as_trace{run(sc->scenario)}; });
}

void as_trace_free(as_trace* trace) { delete trace; }

as_status as_trace_lifetime(const as_trace* trace, const char* node,
                            double* out_seconds) {
  if (!trace || !node || !out_seconds) return AS_EINVAL;
  return guarded([&] { *out_seconds = lifetime(trace->trace, node); });
}

as_status as_trace_write_nodes_csv(const as_trace* trace, const char* path) {
  if (!trace || !path) return AS_EINVAL;
  return guarded([&] { write_nodes_csv(trace->trace, path); });
}

as_status as_trace_write_links_csv(const as_trace* trace, const char* path) {
  if (!trace || !path) return AS_EINVAL;
  return guarded([&] { write_links_csv(trace->trace, path); });
}

as_status as_trace_write_curves_csv(const as_trace* trace, const char* path) {
  if (!trace || !path) return AS_EINVAL;
  return guarded([&] { write_curves_csv(trace->trace, path); });
}

as_status as_compare(const as_scenario* sc, const uint64_t* seeds,
                     size_t n_seeds, const char* out_dir, int export_traces,
                     as_report** out) {
  if (!sc || !seeds || n_seeds == 0 || !out_dir || !out) return AS_EINVAL;
  return guarded([&] {
    std::vector<std::uint64_t> seed_list(seeds, seeds + n_seeds);
    *out = new as_report{run_compare_to_dir(sc->scenario, seed_list, out_dir,
                                            export_traces != 0)};
  });
}

void as_report_free(as_report* report) { delete report; }

as_status as_report_summary(const as_report* report, char* buf, size_t cap) {
  if (!report) return AS_EINVAL;
  copy_out(format_batch_report(report->report), buf, cap);
  return AS_OK;
}

}  // extern "C"
