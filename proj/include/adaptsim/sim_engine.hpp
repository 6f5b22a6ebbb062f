#ifndef ADAPTSIM_SIM_ENGINE_HPP
#define ADAPTSIM_SIM_ENGINE_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "adaptsim/adaptation.hpp"
#include "adaptsim/arch_graph.hpp"
#include "adaptsim/context.hpp"

namespace adaptsim {

struct ScheduledEvent {
  enum class Type { Weights, PriorityDegree };
  Type type = Type::Weights;
  double time = 0;
  // Weights override.
  std::string node;
  double alpha = 1, beta = 1, gamma = 1, mu = 1;
  // Priority-degree override, addressed by the abstract flow.
  std::string producer, consumer;
  DataKind kind = DataKind::D;
  int degree = 0;
};

struct Scenario {
  std::string name;
  ArchGraph abstract;  // as declared in the scenario file
  ArchGraph graph;     // refined per the chosen style
  std::map<std::string, NodeProfile> profiles;  // per node
  StochasticParams stochastic;
  std::map<std::string, MemoryTrace> memory_traces;  // per node, optional
  EnergyCostModel cost_model;
  ActivationPolicy activation;
  double duration = 0;
  double dt = 1;
  double adaptation_interval = 10;
  bool adaptive = true;
  std::uint64_t seed = 0;
  double initial_energy = 100;
  double link_capacity = 100;   // bandwidth units for the 100% band
  int queue_bound = 100;        // per-link, drop-oldest
  double static_rate = 1.0;     // PR1; also the initial link rate
  std::vector<ScheduledEvent> events;

  const NodeProfile& profile_for(const std::string& node) const;
  /// Throws ScenarioError on any violated constraint.
  void check() const;
};

struct NodeStepRecord {
  double energy = 100;
  double memory = 0;
  NodeActivityState state = NodeActivityState::Idle;
  int msgs_sent = 0;
  int msgs_recv = 0;

  bool operator==(const NodeStepRecord&) const = default;
};

struct LinkStepRecord {
  double bandwidth = 0;
  double rate = 0;         // negotiated rate in force this step
  int offered = 0;         // messages produced onto the link this step
  int transferred = 0;
  int dropped = 0;
  int queue_len = 0;       // after the step

  bool operator==(const LinkStepRecord&) const = default;
};

struct StepRecord {
  double time = 0;
  std::map<std::string, NodeStepRecord> nodes;
  std::map<LinkKey, LinkStepRecord> links;
  std::map<std::string, bool> activations;  // entity id -> active

  bool operator==(const StepRecord&) const = default;
};

struct SimTrace {
  std::uint64_t seed = 0;
  bool adaptive = true;
  double dt = 1;
  double duration = 0;
  std::vector<std::string> node_ids;
  std::vector<LinkKey> link_ids;
  std::vector<StepRecord> records;  // floor(duration/dt)+1 entries

  bool operator==(const SimTrace&) const = default;
};

struct NodeLifetime {
  double alive_until_static = 0;
  double alive_until_adaptive = 0;
  double delta_seconds = 0;
  double delta_percent = 0;
};

struct LifetimeReport {
  std::map<std::string, NodeLifetime> nodes;
};

LinkKey link_key(const Link& link);

/// Mutable per-run state; step() advances it by one dt.
class SimState {
 public:
  explicit SimState(const Scenario& scenario);

  void step(const Scenario& scenario, Rng& rng);

  double time() const { return time_; }
  const StepRecord& last_record() const { return records_.back(); }
  std::vector<StepRecord> take_records() { return std::move(records_); }

 private:
  struct LinkState {
    Link link;
    std::string producer_node, consumer_node;
    int queue_len = 0;  // drop-oldest, bounded by scenario.queue_bound
    double send_credit = 0;
    double request_credit = 0;
  };

  ContextSnapshot snapshot() const;
  void apply_events(const Scenario& scenario);
  void record(double bw_default);

  double time_ = 0;
  long long step_index_ = 0;
  ArchGraph graph_;  // activations evolve here
  std::map<std::string, double> energy_;
  std::map<std::string, double> memory_;
  std::map<std::string, NodeProfile> profiles_;
  std::vector<LinkState> links_;  // inter-node, sorted by (from,to,kind)
  std::map<LinkKey, double> bandwidth_;
  std::size_t next_event_ = 0;
  std::vector<StepRecord> records_;

  friend SimTrace run(const Scenario&);
};

SimTrace run(const Scenario& scenario);

double lifetime(const SimTrace& trace, const std::string& node);

LifetimeReport compare(const SimTrace& adaptive_trace,
                       const SimTrace& static_trace);

// CSV / report emission. Numbers are written in shortest round-trip form.
void write_nodes_csv(const SimTrace& trace, const std::string& path);
void write_links_csv(const SimTrace& trace, const std::string& path);
void write_curves_csv(const SimTrace& trace, const std::string& path);
std::string format_report(const LifetimeReport& report);
void write_report_csv(const LifetimeReport& report, const std::string& path);

}  // namespace adaptsim

#endif
