#include "adaptsim/scenario_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "adaptsim/error.hpp"

namespace adaptsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
  throw Error(ErrorCode::ParseError, msg);
}

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      fail("unknown key '" + it.key() + "' in " + where);
}

DataKind parse_kind(const std::string& s, const std::string& where) {
  if (s == "D") return DataKind::D;
  if (s == "P") return DataKind::P;
  fail("bad data kind '" + s + "' in " + where + " (expected D or P)");
}

ThresholdScale parse_scale(const json& arr, const std::string& where) {
  ThresholdScale scale;
  if (!arr.is_array()) fail(where + " must be an array of [lower,upper,rate]");
  for (const json& band : arr) {
    if (!band.is_array() || band.size() != 3)
      fail(where + " bands must be [lower,upper,rate] triples");
    scale.bands.push_back({band[0].get<double>(), band[1].get<double>(),
                           band[2].get<double>()});
  }
  try {
    scale.check();
  } catch (const Error& e) {
    fail(where + ": " + e.what());
  }
  return scale;
}

NodeProfile parse_profile(const json& obj, const std::string& where,
                          double pr1, double pr2, double pr3) {
  check_keys(obj, where, {"alpha", "beta", "gamma", "mu", "scales"});
  NodeProfile p;
  p.alpha = obj.value("alpha", 1.0);
  p.beta = obj.value("beta", 1.0);
  p.gamma = obj.value("gamma", 1.0);
  p.mu = obj.value("mu", 1.0);
  if (!(p.alpha + p.beta + p.gamma + p.mu > 0) || p.alpha < 0 || p.beta < 0 ||
      p.gamma < 0 || p.mu < 0)
    throw Error(ErrorCode::InvalidProfile,
                where + ": weights must be non-negative with positive sum");
  p.energy_scale = default_scale(pr1, pr2, pr3);
  p.memory_scale = default_scale(pr1, pr2, pr3);
  p.bandwidth_scale = default_scale(pr1, pr2, pr3);
  p.priority_scale = default_priority_scale(pr1);
  if (obj.contains("scales")) {
    const json& scales = obj.at("scales");
    check_keys(scales, where + ".scales",
               {"energy", "memory", "bandwidth", "priority"});
    if (scales.contains("energy"))
      p.energy_scale = parse_scale(scales["energy"], where + ".scales.energy");
    if (scales.contains("memory"))
      p.memory_scale = parse_scale(scales["memory"], where + ".scales.memory");
    if (scales.contains("bandwidth"))
      p.bandwidth_scale =
          parse_scale(scales["bandwidth"], where + ".scales.bandwidth");
    if (scales.contains("priority"))
      p.priority_scale =
          parse_scale(scales["priority"], where + ".scales.priority");
  }
  return p;
}

StyleChoice parse_style(const std::string& s) {
  if (s == "direct") return StyleChoice::Direct;
  if (s == "mediated") return StyleChoice::Mediated;
  fail("bad style '" + s + "' (expected direct or mediated)");
}

}  // namespace

void apply_style(Scenario& scenario, StyleChoice style) {
  scenario.graph = refine(scenario.abstract, style);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(path + ": " + e.what());
  }
  if (!doc.is_object()) fail(path + ": scenario must be a JSON object");
  check_keys(doc, "scenario",
             {"name", "notes", "nodes", "flows", "style", "rates", "profiles",
              "stochastic", "memory_traces", "cost_model", "activation",
              "duration_s", "dt_s", "adaptation_interval_s", "adaptive",
              "seed", "initial_energy_pct", "link_capacity", "queue_bound",
              "events"});

  Scenario sc;
  sc.name = doc.value("name", std::filesystem::path(path).stem().string());

  double pr1 = 1.0, pr2 = 0.5, pr3 = 0.1;
  if (doc.contains("rates")) {
    check_keys(doc["rates"], "rates", {"pr1", "pr2", "pr3"});
    pr1 = doc["rates"].value("pr1", pr1);
    pr2 = doc["rates"].value("pr2", pr2);
    pr3 = doc["rates"].value("pr3", pr3);
  }
  sc.static_rate = pr1;

  std::vector<NodeRecord> nodes;
  if (!doc.contains("nodes") || !doc["nodes"].is_array())
    fail("scenario requires a 'nodes' array");
  for (const json& n : doc["nodes"]) {
    check_keys(n, "nodes[]", {"id", "role"});
    nodes.push_back({n.at("id").get<std::string>(), n.value("role", "")});
  }
  std::vector<FlowEdge> flows;
  for (const json& f : doc.value("flows", json::array())) {
    check_keys(f, "flows[]", {"producer", "consumer", "kind", "priority"});
    DataKind kind = parse_kind(f.at("kind").get<std::string>(), "flows[]");
    flows.push_back({f.at("producer").get<std::string>(),
                     f.at("consumer").get<std::string>(), kind,
                     f.value("priority", default_priority(kind))});
  }
  sc.abstract = build_abstract(nodes, flows);
  apply_style(sc, parse_style(doc.value("style", "direct")));

  if (!doc.contains("profiles") || !doc["profiles"].is_object())
    fail("scenario requires a 'profiles' object");
  for (auto it = doc["profiles"].begin(); it != doc["profiles"].end(); ++it) {
    if (it.key() != "default" && !sc.abstract.has_node(it.key()))
      fail("profile for unknown node '" + it.key() + "'");
    sc.profiles[it.key()] =
        parse_profile(it.value(), "profiles." + it.key(), pr1, pr2, pr3);
  }

  if (doc.contains("stochastic")) {
    const json& st = doc["stochastic"];
    check_keys(st, "stochastic",
               {"lambda", "bandwidth_mean", "bandwidth_sigma",
                "lambda_per_node"});
    sc.stochastic.lambda = st.value("lambda", 1.0);
    sc.stochastic.bandwidth_mean = st.value("bandwidth_mean", 100.0);
    sc.stochastic.bandwidth_sigma = st.value("bandwidth_sigma", 10.0);
    if (st.contains("lambda_per_node"))
      for (auto it = st["lambda_per_node"].begin();
           it != st["lambda_per_node"].end(); ++it) {
        if (!sc.abstract.has_node(it.key()))
          fail("lambda override for unknown node '" + it.key() + "'");
        sc.stochastic.lambda_per_node[it.key()] = it.value().get<double>();
      }
  }

  std::filesystem::path base = std::filesystem::path(path).parent_path();
  const json traces = doc.value("memory_traces", json::object());
  for (const auto& [node, file] : traces.items()) {
    if (!sc.abstract.has_node(node))
      fail("memory trace for unknown node '" + node + "'");
    sc.memory_traces[node] =
        load_memory_trace((base / file.get<std::string>()).string());
  }

  if (doc.contains("cost_model")) {
    const json& cm = doc["cost_model"];
    check_keys(cm, "cost_model",
               {"idle", "inactive", "active_base", "push_send", "push_recv",
                "pull_request", "pull_transfer"});
    sc.cost_model.idle_cost = cm.value("idle", sc.cost_model.idle_cost);
    sc.cost_model.inactive_cost =
        cm.value("inactive", sc.cost_model.inactive_cost);
    sc.cost_model.active_base_cost =
        cm.value("active_base", sc.cost_model.active_base_cost);
    sc.cost_model.push_send_cost =
        cm.value("push_send", sc.cost_model.push_send_cost);
    sc.cost_model.push_recv_cost =
        cm.value("push_recv", sc.cost_model.push_recv_cost);
    sc.cost_model.pull_request_cost =
        cm.value("pull_request", sc.cost_model.pull_request_cost);
    sc.cost_model.pull_transfer_cost =
        cm.value("pull_transfer", sc.cost_model.pull_transfer_cost);
  }

  if (doc.contains("activation")) {
    const json& a = doc["activation"];
    check_keys(a, "activation", {"deactivate_below", "reactivate_above"});
    sc.activation.deactivate_below =
        a.value("deactivate_below", sc.activation.deactivate_below);
    sc.activation.reactivate_above =
        a.value("reactivate_above", sc.activation.reactivate_above);
  }

  sc.duration = doc.value("duration_s", 0.0);
  sc.dt = doc.value("dt_s", 1.0);
  sc.adaptation_interval = doc.value("adaptation_interval_s", 10.0);
  sc.adaptive = doc.value("adaptive", true);
  sc.seed = doc.value("seed", std::uint64_t{0});
  sc.initial_energy = doc.value("initial_energy_pct", 100.0);
  sc.link_capacity = doc.value("link_capacity", 100.0);
  sc.queue_bound = doc.value("queue_bound", 100);

  for (const json& ev : doc.value("events", json::array())) {
    ScheduledEvent e;
    std::string type = ev.value("type", "");
    e.time = ev.value("time_s", 0.0);
    if (type == "weights") {
      check_keys(ev, "events[]",
                 {"type", "time_s", "node", "alpha", "beta", "gamma", "mu"});
      e.type = ScheduledEvent::Type::Weights;
      e.node = ev.at("node").get<std::string>();
      if (!sc.abstract.has_node(e.node))
        fail("event for unknown node '" + e.node + "'");
      e.alpha = ev.value("alpha", 1.0);
      e.beta = ev.value("beta", 1.0);
      e.gamma = ev.value("gamma", 1.0);
      e.mu = ev.value("mu", 1.0);
    } else if (type == "priority_degree") {
      check_keys(ev, "events[]",
                 {"type", "time_s", "producer", "consumer", "kind", "degree"});
      e.type = ScheduledEvent::Type::PriorityDegree;
      e.producer = ev.at("producer").get<std::string>();
      e.consumer = ev.at("consumer").get<std::string>();
      e.kind = parse_kind(ev.at("kind").get<std::string>(), "events[]");
      e.degree = ev.value("degree", 0);
    } else {
      fail("bad event type '" + type +
           "' (expected weights or priority_degree)");
    }
    sc.events.push_back(e);
  }
  std::stable_sort(sc.events.begin(), sc.events.end(),
                   [](const ScheduledEvent& a, const ScheduledEvent& b) {
                     return a.time < b.time;
                   });

  sc.check();
  return sc;
}

}  // namespace adaptsim
