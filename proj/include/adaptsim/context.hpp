#ifndef ADAPTSIM_CONTEXT_HPP
#define ADAPTSIM_CONTEXT_HPP

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace adaptsim {

using Rng = std::mt19937_64;

/// Link identity inside a context snapshot: (from entity, to entity, kind tag).
using LinkKey = std::string;

/// Context factors at one instant, keyed per node / per link.
struct ContextSnapshot {
  double time = 0;
  std::map<std::string, double> energy;     // percent, per node
  std::map<std::string, double> memory;     // saturation percent, per node
  std::map<LinkKey, double> bandwidth;      // units/second, per link
  std::map<LinkKey, int> priority_degree;   // per link

  double node_energy(const std::string& node) const;
  double node_memory(const std::string& node) const;
  double link_bandwidth(const LinkKey& link) const;
  int link_priority(const LinkKey& link) const;
};

struct StochasticParams {
  double lambda = 1.0;          // messages/second per producer entity
  double bandwidth_mean = 100;  // m
  double bandwidth_sigma = 10;  // sigma
  std::map<std::string, double> lambda_per_node;  // overrides

  double node_lambda(const std::string& node) const {
    auto it = lambda_per_node.find(node);
    return it == lambda_per_node.end() ? lambda : it->second;
  }
};

/// Logged memory saturation samples, step-hold interpolation.
struct MemoryTrace {
  std::vector<std::pair<double, double>> samples;  // (time_s, saturation_pct)
};

struct EnergyCostModel {
  double idle_cost = 0.005;          // percent/second
  double inactive_cost = 0.002;      // percent/second
  double active_base_cost = 0.01;    // percent/second
  double push_send_cost = 0.02;      // percent/message
  double push_recv_cost = 0.01;      // percent/message
  double pull_request_cost = 0.005;  // percent/message
  double pull_transfer_cost = 0.015; // percent/message

  void check() const;  // throws InvalidParam on a malformed model
};

enum class NodeActivityState { Producing, Consuming, Idle, Inactive };

const char* to_string(NodeActivityState state);

int sample_production(double lambda, double dt, Rng& rng);

double sample_bandwidth(double mean, double sigma, Rng& rng);

MemoryTrace load_memory_trace(const std::string& path);

double memory_at(const MemoryTrace& trace, double t);

/// Per-step message counters used for energy accounting.
struct MessageCounts {
  int push_sent = 0;
  int push_received = 0;
  int pull_requests = 0;
  int pull_served = 0;
};

double consume_energy(double energy, NodeActivityState state,
                      const MessageCounts& counts, double dt,
                      const EnergyCostModel& model);

/// Coarse variant: sent counts as push sends, received as push receives.
double consume_energy(double energy, NodeActivityState state, int msgs_sent,
                      int msgs_recv, double dt, const EnergyCostModel& model);

}  // namespace adaptsim

#endif
