#include "adaptsim/context.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "adaptsim/error.hpp"

namespace adaptsim {

namespace {

template <typename Map>
auto lookup(const Map& map, const std::string& key, const char* what) {
  auto it = map.find(key);
  if (it == map.end())
    throw Error(ErrorCode::MissingContext,
                std::string(what) + " entry for '" + key + "'");
  return it->second;
}

}  // namespace

double ContextSnapshot::node_energy(const std::string& node) const {
  return lookup(energy, node, "energy");
}

double ContextSnapshot::node_memory(const std::string& node) const {
  return lookup(memory, node, "memory");
}

double ContextSnapshot::link_bandwidth(const LinkKey& link) const {
  return lookup(bandwidth, link, "bandwidth");
}

int ContextSnapshot::link_priority(const LinkKey& link) const {
  auto it = priority_degree.find(link);
  return it == priority_degree.end() ? 0 : it->second;
}

void EnergyCostModel::check() const {
  const double costs[] = {idle_cost,      inactive_cost,     active_base_cost,
                          push_send_cost, push_recv_cost,    pull_request_cost,
                          pull_transfer_cost};
  for (double c : costs)
    if (c < 0 || !std::isfinite(c))
      throw Error(ErrorCode::InvalidParam, "energy costs must be finite, >= 0");
  if (!(inactive_cost <= idle_cost && idle_cost <= active_base_cost))
    throw Error(ErrorCode::InvalidParam,
                "cost model requires inactive <= idle <= active_base");
}

const char* to_string(NodeActivityState state) {
  switch (state) {
    case NodeActivityState::Producing: return "producing";
    case NodeActivityState::Consuming: return "consuming";
    case NodeActivityState::Idle: return "idle";
    case NodeActivityState::Inactive: return "inactive";
  }
  return "?";
}

int sample_production(double lambda, double dt, Rng& rng) {
  if (lambda < 0 || dt <= 0)
    throw Error(ErrorCode::InvalidParam, "lambda >= 0 and dt > 0 required");
  if (lambda == 0) return 0;
  std::poisson_distribution<int> dist(lambda * dt);
  return dist(rng);
}

double sample_bandwidth(double mean, double sigma, Rng& rng) {
  if (sigma < 0)
    throw Error(ErrorCode::InvalidParam, "sigma must be >= 0");
  if (sigma == 0) return std::max(0.0, mean);
  std::normal_distribution<double> dist(mean, sigma);
  return std::max(0.0, dist(rng));
}

MemoryTrace load_memory_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::IoError, "cannot open memory trace '" + path + "'");
  MemoryTrace trace;
  std::string line;
  if (!std::getline(in, line) || line.rfind("time_s,saturation_pct", 0) != 0)
    throw Error(ErrorCode::ParseError,
                "memory trace '" + path +
                    "' must start with header 'time_s,saturation_pct'");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    double t, sat;
    char comma;
    if (!(ls >> t >> comma >> sat) || comma != ',')
      throw Error(ErrorCode::ParseError, path + ":" + std::to_string(lineno) +
                                             ": bad trace row '" + line + "'");
    if (sat < 0 || sat > 100)
      throw Error(ErrorCode::ParseError,
                  path + ":" + std::to_string(lineno) +
                      ": saturation outside [0,100]");
    if (!trace.samples.empty() && t <= trace.samples.back().first)
      throw Error(ErrorCode::ParseError,
                  path + ":" + std::to_string(lineno) +
                      ": sample times must be strictly increasing");
    trace.samples.emplace_back(t, sat);
  }
  if (trace.samples.empty())
    throw Error(ErrorCode::EmptyTrace, "'" + path + "' has no samples");
  return trace;
}

double memory_at(const MemoryTrace& trace, double t) {
  if (trace.samples.empty())
    throw Error(ErrorCode::EmptyTrace, "memory trace has no samples");
  // Last sample with time <= t; before the first sample, hold its value.
  double value = trace.samples.front().second;
  for (const auto& [time, sat] : trace.samples) {
    if (time > t) break;
    value = sat;
  }
  return value;
}

double consume_energy(double energy, NodeActivityState state,
                      const MessageCounts& counts, double dt,
                      const EnergyCostModel& model) {
  double base;
  switch (state) {
    case NodeActivityState::Producing:
    case NodeActivityState::Consuming:
      base = model.active_base_cost;
      break;
    case NodeActivityState::Idle:
      base = model.idle_cost;
      break;
    case NodeActivityState::Inactive:
      base = model.inactive_cost;
      break;
  }
  double cost = base * dt + model.push_send_cost * counts.push_sent +
                model.push_recv_cost * counts.push_received +
                model.pull_request_cost * counts.pull_requests +
                model.pull_transfer_cost * counts.pull_served;
  return std::max(0.0, energy - cost);
}

double consume_energy(double energy, NodeActivityState state, int msgs_sent,
                      int msgs_recv, double dt, const EnergyCostModel& model) {
  MessageCounts counts;
  counts.push_sent = msgs_sent;
  counts.push_received = msgs_recv;
  return consume_energy(energy, state, counts, dt, model);
}

}  // namespace adaptsim
