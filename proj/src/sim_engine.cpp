#include "adaptsim/sim_engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <tuple>

#include "adaptsim/error.hpp"

namespace adaptsim {

namespace {

constexpr double kCreditEps = 1e-9;

// Whole messages available from an accumulated fractional credit.
int whole_credit(double credit) {
  return static_cast<int>(std::floor(credit + kCreditEps));
}

// Unused whole credits do not bank across steps; only the fractional
// remainder carries over, so per-step transfers stay <= ceil(rate*dt).
// The cap sits below 1.0 by more than kCreditEps so the epsilon in
// whole_credit can never round a full carry up to an extra message.
double carry_credit(double credit, int used) {
  double rest = credit - used;
  return std::min(rest, 1.0 - 2 * kCreditEps);
}

EntityKind processing_kind(DataKind kind) {
  return kind == DataKind::D ? EntityKind::ProcessingD : EntityKind::ProcessingP;
}

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::ofstream open_out(const std::string& path) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  return out;
}

}  // namespace

LinkKey link_key(const Link& link) {
  return link.from + "->" + link.to + ":" + to_string(link.kind);
}

const NodeProfile& Scenario::profile_for(const std::string& node) const {
  auto it = profiles.find(node);
  if (it != profiles.end()) return it->second;
  it = profiles.find("default");
  if (it != profiles.end()) return it->second;
  throw Error(ErrorCode::ScenarioError, "no profile for node '" + node + "'");
}

void Scenario::check() const {
  if (dt <= 0) throw Error(ErrorCode::ScenarioError, "dt must be > 0");
  if (duration < 0) throw Error(ErrorCode::ScenarioError, "duration must be >= 0");
  if (adaptation_interval < dt)
    throw Error(ErrorCode::ScenarioError, "adaptation_interval must be >= dt");
  if (queue_bound < 1)
    throw Error(ErrorCode::ScenarioError, "queue_bound must be >= 1");
  if (static_rate < 0)
    throw Error(ErrorCode::ScenarioError, "static_rate must be >= 0");
  if (initial_energy < 0 || initial_energy > 100)
    throw Error(ErrorCode::ScenarioError, "initial_energy must be in [0,100]");
  if (stochastic.lambda < 0 || stochastic.bandwidth_sigma < 0)
    throw Error(ErrorCode::ScenarioError,
                "stochastic params require lambda >= 0 and sigma >= 0");
  if (graph.level != GraphLevel::Refined)
    throw Error(ErrorCode::ScenarioError, "scenario graph must be refined");
  auto violations = validate(graph);
  if (!violations.empty())
    throw Error(ErrorCode::ScenarioError,
                "graph invariant violated: " + violations.front().invariant +
                    " (" + violations.front().element + ")");
  try {
    cost_model.check();
    if (activation.reactivate_above < activation.deactivate_below)
      throw Error(ErrorCode::InvalidParam,
                  "activation requires reactivate_above >= deactivate_below");
    for (const NodeRecord& n : graph.nodes) {
      const NodeProfile& p = profile_for(n.id);
      double sum = p.alpha + p.beta + p.gamma + p.mu;
      if (!(sum > 0) || p.alpha < 0 || p.beta < 0 || p.gamma < 0 || p.mu < 0)
        throw Error(ErrorCode::InvalidProfile,
                    "profile weights for '" + n.id + "'");
      p.energy_scale.check();
      p.memory_scale.check();
      p.bandwidth_scale.check();
      p.priority_scale.check();
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::ScenarioError, e.what());
  }
  for (const auto& [node, trace] : memory_traces) {
    if (!graph.has_node(node))
      throw Error(ErrorCode::ScenarioError,
                  "memory trace for unknown node '" + node + "'");
    if (trace.samples.empty())
      throw Error(ErrorCode::ScenarioError,
                  "memory trace for '" + node + "' is empty");
  }
}

SimState::SimState(const Scenario& scenario) {
  graph_ = scenario.graph;
  for (const NodeRecord& n : graph_.nodes) {
    energy_[n.id] = scenario.initial_energy;
    auto it = scenario.memory_traces.find(n.id);
    memory_[n.id] =
        it == scenario.memory_traces.end() ? 90.0 : memory_at(it->second, 0);
    profiles_[n.id] = scenario.profile_for(n.id);
  }
  for (const Link& l : graph_.links) {
    if (l.scope != LinkScope::InterNode) continue;
    LinkState st;
    st.link = l;
    if (!st.link.negotiated_rate)
      st.link.negotiated_rate = scenario.static_rate;
    const Entity* from = graph_.find_entity(l.from);
    const Entity* to = graph_.find_entity(l.to);
    st.producer_node = from ? from->owner : "";
    st.consumer_node = to ? to->owner : "";
    links_.push_back(std::move(st));
  }
  std::sort(links_.begin(), links_.end(),
            [](const LinkState& a, const LinkState& b) {
              return std::tie(a.link.from, a.link.to, a.link.kind) <
                     std::tie(b.link.from, b.link.to, b.link.kind);
            });
  for (const LinkState& l : links_)
    bandwidth_[link_key(l.link)] = scenario.stochastic.bandwidth_mean;
  record(scenario.stochastic.bandwidth_mean);
}

ContextSnapshot SimState::snapshot() const {
  ContextSnapshot ctx;
  ctx.time = time_;
  ctx.energy = energy_;
  ctx.memory = memory_;
  ctx.bandwidth = bandwidth_;
  for (const LinkState& l : links_)
    ctx.priority_degree[link_key(l.link)] = l.link.priority_degree;
  return ctx;
}

void SimState::apply_events(const Scenario& scenario) {
  while (next_event_ < scenario.events.size() &&
         scenario.events[next_event_].time <= time_ + kCreditEps) {
    const ScheduledEvent& ev = scenario.events[next_event_++];
    if (ev.type == ScheduledEvent::Type::Weights) {
      auto it = profiles_.find(ev.node);
      if (it == profiles_.end()) continue;
      it->second.alpha = ev.alpha;
      it->second.beta = ev.beta;
      it->second.gamma = ev.gamma;
      it->second.mu = ev.mu;
    } else {
      for (LinkState& l : links_) {
        if (l.producer_node == ev.producer && l.consumer_node == ev.consumer &&
            l.link.kind == ev.kind)
          l.link.priority_degree = ev.degree;
      }
    }
  }
}

void SimState::record(double bw_default) {
  StepRecord rec;
  rec.time = time_;
  for (const NodeRecord& n : graph_.nodes) {
    NodeStepRecord nr;
    nr.energy = energy_.at(n.id);
    nr.memory = memory_.at(n.id);
    nr.state = NodeActivityState::Idle;
    rec.nodes[n.id] = nr;
  }
  for (const LinkState& l : links_) {
    LinkStepRecord lr;
    lr.bandwidth = bw_default;
    lr.rate = *l.link.negotiated_rate;
    lr.queue_len = l.queue_len;
    rec.links[link_key(l.link)] = lr;
  }
  for (const Entity& e : graph_.entities) rec.activations[e.id] = e.active;
  records_.push_back(std::move(rec));
}

void SimState::step(const Scenario& scenario, Rng& rng) {
  const double dt = scenario.dt;
  apply_events(scenario);

  // (1) Context inputs for this step.
  for (const LinkState& l : links_)
    bandwidth_[link_key(l.link)] = sample_bandwidth(
        scenario.stochastic.bandwidth_mean, scenario.stochastic.bandwidth_sigma,
        rng);
  for (const NodeRecord& n : graph_.nodes) {
    auto it = scenario.memory_traces.find(n.id);
    if (it != scenario.memory_traces.end())
      memory_[n.id] = memory_at(it->second, time_);
  }

  auto alive = [&](const std::string& node) { return energy_.at(node) > 0; };
  auto entity_active = [&](const std::string& node, EntityKind kind) {
    const Entity* e = graph_.node_entity(node, kind);
    return e != nullptr && e->active;
  };

  StepRecord rec;
  rec.time = time_ + dt;
  std::map<std::string, MessageCounts> counts;
  for (const NodeRecord& n : graph_.nodes) counts[n.id];

  // (2) Production: each active producer entity feeds its link's queue.
  for (LinkState& l : links_) {
    LinkStepRecord lr;
    lr.bandwidth = bandwidth_.at(link_key(l.link));
    lr.rate = *l.link.negotiated_rate;
    bool producer_ok = alive(l.producer_node) &&
                       entity_active(l.producer_node, EntityKind::Communication) &&
                       entity_active(l.producer_node,
                                     processing_kind(l.link.kind));
    if (producer_ok) {
      double lambda = scenario.stochastic.node_lambda(l.producer_node);
      lr.offered = sample_production(lambda, dt, rng);
    }
    l.queue_len += lr.offered;
    if (l.queue_len > scenario.queue_bound) {
      lr.dropped = l.queue_len - scenario.queue_bound;
      l.queue_len = scenario.queue_bound;
    }
    rec.links[link_key(l.link)] = lr;
  }

  // (3) Transfers under rate and bandwidth caps.
  for (LinkState& l : links_) {
    LinkStepRecord& lr = rec.links[link_key(l.link)];
    double rate = *l.link.negotiated_rate;
    int bw_cap = static_cast<int>(std::floor(lr.bandwidth * dt + kCreditEps));
    bool producer_ok = alive(l.producer_node) &&
                       entity_active(l.producer_node, EntityKind::Communication) &&
                       entity_active(l.producer_node,
                                     processing_kind(l.link.kind));
    bool consumer_ok = alive(l.consumer_node) &&
                       entity_active(l.consumer_node, EntityKind::Communication) &&
                       entity_active(l.consumer_node,
                                     processing_kind(l.link.kind));
    if (l.link.mode == InteractionMode::Push) {
      l.send_credit += rate * dt;
      int n = 0;
      if (producer_ok && consumer_ok)
        n = std::min({whole_credit(l.send_credit), l.queue_len, bw_cap});
      l.send_credit = carry_credit(l.send_credit, n);
      l.queue_len -= n;
      lr.transferred = n;
      counts[l.producer_node].push_sent += n;
      counts[l.consumer_node].push_received += n;
    } else {
      l.request_credit += rate * dt;
      int reqs = 0;
      if (consumer_ok) reqs = whole_credit(l.request_credit);
      l.request_credit = carry_credit(l.request_credit, reqs);
      counts[l.consumer_node].pull_requests += reqs;
      int n = 0;
      if (producer_ok && reqs > 0)
        n = std::min({reqs, l.queue_len, bw_cap});
      l.queue_len -= n;
      lr.transferred = n;
      counts[l.producer_node].pull_served += n;
    }
    lr.queue_len = l.queue_len;
  }

  // (4) Energy per node from its activity state and message counts.
  for (const NodeRecord& n : graph_.nodes) {
    const MessageCounts& c = counts.at(n.id);
    int sent = c.push_sent + c.pull_served;
    int recv = c.push_received;
    for (const LinkState& l : links_)
      if (l.consumer_node == n.id && l.link.mode == InteractionMode::Pull)
        recv += rec.links.at(link_key(l.link)).transferred;

    bool any_processing_active = false;
    bool has_processing = false;
    for (const Entity& e : graph_.entities) {
      if (e.owner != n.id || (e.kind != EntityKind::ProcessingD &&
                              e.kind != EntityKind::ProcessingP))
        continue;
      has_processing = true;
      if (e.active) any_processing_active = true;
    }
    NodeActivityState state;
    if (sent >= 1)
      state = NodeActivityState::Producing;
    else if (recv >= 1)
      state = NodeActivityState::Consuming;
    else if (has_processing && !any_processing_active)
      state = NodeActivityState::Inactive;
    else
      state = NodeActivityState::Idle;

    energy_[n.id] =
        consume_energy(energy_.at(n.id), state, c, dt, scenario.cost_model);

    NodeStepRecord nr;
    nr.energy = energy_.at(n.id);
    nr.memory = memory_.at(n.id);
    nr.state = state;
    nr.msgs_sent = sent;
    nr.msgs_recv = recv;
    rec.nodes[n.id] = nr;
  }

  // (5) Periodic re-negotiation and activation policy.
  long long adapt_every =
      std::max(1LL, llround(scenario.adaptation_interval / dt));
  if (scenario.adaptive && step_index_ % adapt_every == 0) {
    ContextSnapshot ctx = snapshot();
    for (LinkState& l : links_) {
      l.link = adapt_link(l.link, l.producer_node, l.consumer_node, ctx,
                          profiles_.at(l.producer_node),
                          profiles_.at(l.consumer_node),
                          scenario.link_capacity);
    }
    for (const NodeRecord& n : graph_.nodes) {
      auto activation = apply_activation(graph_, n.id, ctx, scenario.activation);
      for (Entity& e : graph_.entities) {
        auto it = activation.find(e.id);
        if (it != activation.end()) e.active = it->second;
      }
    }
  }

  for (const Entity& e : graph_.entities) rec.activations[e.id] = e.active;
  time_ += dt;
  ++step_index_;
  records_.push_back(std::move(rec));
}

SimTrace run(const Scenario& scenario) {
  scenario.check();
  Rng rng(scenario.seed);
  SimState state(scenario);
  long long steps =
      static_cast<long long>(std::floor(scenario.duration / scenario.dt));
  for (long long i = 0; i < steps; ++i) state.step(scenario, rng);

  SimTrace trace;
  trace.seed = scenario.seed;
  trace.adaptive = scenario.adaptive;
  trace.dt = scenario.dt;
  trace.duration = scenario.duration;
  for (const NodeRecord& n : scenario.graph.nodes)
    trace.node_ids.push_back(n.id);
  std::sort(trace.node_ids.begin(), trace.node_ids.end());
  trace.records = state.take_records();
  if (!trace.records.empty())
    for (const auto& [key, lr] : trace.records.front().links)
      trace.link_ids.push_back(key);
  return trace;
}

double lifetime(const SimTrace& trace, const std::string& node) {
  if (std::find(trace.node_ids.begin(), trace.node_ids.end(), node) ==
      trace.node_ids.end())
    throw Error(ErrorCode::UnknownNode, "'" + node + "'");
  for (const StepRecord& rec : trace.records)
    if (rec.nodes.at(node).energy <= 0) return rec.time;
  return trace.duration;
}

LifetimeReport compare(const SimTrace& adaptive_trace,
                       const SimTrace& static_trace) {
  if (adaptive_trace.node_ids != static_trace.node_ids)
    throw Error(ErrorCode::IncomparableTraces, "node sets differ");
  if (adaptive_trace.seed != static_trace.seed)
    throw Error(ErrorCode::IncomparableTraces, "seeds differ");
  LifetimeReport report;
  for (const std::string& node : adaptive_trace.node_ids) {
    NodeLifetime lt;
    lt.alive_until_static = lifetime(static_trace, node);
    lt.alive_until_adaptive = lifetime(adaptive_trace, node);
    lt.delta_seconds = lt.alive_until_adaptive - lt.alive_until_static;
    lt.delta_percent = lt.alive_until_static > 0
                           ? 100.0 * lt.delta_seconds / lt.alive_until_static
                           : 0.0;
    report.nodes[node] = lt;
  }
  return report;
}

void write_nodes_csv(const SimTrace& trace, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "time_s,node,energy_pct,memory_pct,state,msgs_sent,msgs_recv\n";
  for (const StepRecord& rec : trace.records)
    for (const std::string& node : trace.node_ids) {
      const NodeStepRecord& nr = rec.nodes.at(node);
      out << fmt(rec.time) << ',' << node << ',' << fmt(nr.energy) << ','
          << fmt(nr.memory) << ',' << to_string(nr.state) << ','
          << nr.msgs_sent << ',' << nr.msgs_recv << '\n';
    }
}

void write_links_csv(const SimTrace& trace, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "time_s,link,bandwidth,rate,transferred,dropped\n";
  for (const StepRecord& rec : trace.records)
    for (const LinkKey& key : trace.link_ids) {
      const LinkStepRecord& lr = rec.links.at(key);
      out << fmt(rec.time) << ',' << key << ',' << fmt(lr.bandwidth) << ','
          << fmt(lr.rate) << ',' << lr.transferred << ',' << lr.dropped
          << '\n';
    }
}

void write_curves_csv(const SimTrace& trace, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "time_s";
  for (const std::string& node : trace.node_ids) out << ',' << node;
  out << '\n';
  for (const StepRecord& rec : trace.records) {
    out << fmt(rec.time);
    for (const std::string& node : trace.node_ids)
      out << ',' << fmt(rec.nodes.at(node).energy);
    out << '\n';
  }
}

std::string format_report(const LifetimeReport& report) {
  std::ostringstream os;
  os << "node  static_s  adaptive_s  delta_s  delta_pct\n";
  for (const auto& [node, lt] : report.nodes) {
    os << node << "  " << fmt(lt.alive_until_static) << "  "
       << fmt(lt.alive_until_adaptive) << "  " << fmt(lt.delta_seconds)
       << "  " << fmt(lt.delta_percent) << "\n";
  }
  return os.str();
}

void write_report_csv(const LifetimeReport& report, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "node,static_lifetime_s,adaptive_lifetime_s,delta_s,delta_pct\n";
  for (const auto& [node, lt] : report.nodes)
    out << node << ',' << fmt(lt.alive_until_static) << ','
        << fmt(lt.alive_until_adaptive) << ',' << fmt(lt.delta_seconds) << ','
        << fmt(lt.delta_percent) << '\n';
}

}  // namespace adaptsim
