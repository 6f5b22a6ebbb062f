#include <doctest.h>

#include <cmath>

#include "adaptsim/error.hpp"
#include "adaptsim/refinement.hpp"
#include "adaptsim/scenario_io.hpp"
#include "adaptsim/sim_engine.hpp"

using namespace adaptsim;

namespace {

// Two nodes, one push (D) and one pull (P) flow from A to B.
Scenario two_node_scenario() {
  Scenario sc;
  sc.abstract = build_abstract({{"A", "producer"}, {"B", "consumer"}},
                               {{"A", "B", DataKind::D, 1},
                                {"A", "B", DataKind::P, 0}});
  sc.graph = refine(sc.abstract, StyleChoice::Direct);
  NodeProfile p;
  p.energy_scale = default_scale(1.0, 0.5, 0.1);
  p.memory_scale = default_scale(1.0, 0.5, 0.1);
  p.bandwidth_scale = default_scale(1.0, 0.5, 0.1);
  p.priority_scale = default_priority_scale(1.0);
  sc.profiles["default"] = p;
  sc.stochastic.lambda = 1.0;
  sc.stochastic.bandwidth_mean = 100;
  sc.stochastic.bandwidth_sigma = 0;
  sc.duration = 100;
  sc.dt = 1;
  sc.adaptation_interval = 10;
  sc.adaptive = false;
  sc.seed = 5;
  sc.static_rate = 1.0;
  return sc;
}

int total_transferred(const SimTrace& trace) {
  int n = 0;
  for (const StepRecord& rec : trace.records)
    for (const auto& [key, lr] : rec.links) n += lr.transferred;
  return n;
}

}  // namespace

TEST_CASE("run: record count and times") {
  Scenario sc = two_node_scenario();
  sc.duration = 10;
  SimTrace trace = run(sc);
  REQUIRE(trace.records.size() == 11);
  for (std::size_t i = 0; i < trace.records.size(); ++i)
    CHECK(trace.records[i].time == doctest::Approx(double(i)));
}

TEST_CASE("run: duration 0 yields only the initial record") {
  Scenario sc = two_node_scenario();
  sc.duration = 0;
  SimTrace trace = run(sc);
  CHECK(trace.records.size() == 1);
  CHECK(trace.records.front().time == 0);
}

TEST_CASE("lambda 0 means no transfers, only time-based drain") {
  Scenario sc = two_node_scenario();
  sc.stochastic.lambda = 0;
  SimTrace trace = run(sc);
  CHECK(total_transferred(trace) == 0);
  for (const StepRecord& rec : trace.records)
    for (const auto& [node, nr] : rec.nodes)
      CHECK(nr.state == NodeActivityState::Idle);
}

TEST_CASE("push link transfers exactly the rate cap under load") {
  Scenario sc = two_node_scenario();
  sc.stochastic.lambda = 50;  // far above the 1 msg/s rate cap
  sc.duration = 20;
  SimTrace trace = run(sc);
  LinkKey push = "A.C->B.C:D";
  for (std::size_t i = 1; i < trace.records.size(); ++i)
    CHECK(trace.records[i].links.at(push).transferred == 1);
  // Queue saturates at the bound, drops, then the transfer leaves bound-1.
  const LinkStepRecord& last = trace.records.back().links.at(push);
  CHECK(last.queue_len == sc.queue_bound - 1);
  CHECK(last.dropped > 0);
}

TEST_CASE("static mode keeps the initial rate forever") {
  Scenario sc = two_node_scenario();
  sc.adaptive = false;
  sc.duration = 2000;
  sc.cost_model.push_send_cost = 0.1;  // force deep energy loss
  SimTrace trace = run(sc);
  for (const StepRecord& rec : trace.records)
    for (const auto& [key, lr] : rec.links) CHECK(lr.rate == sc.static_rate);
}

TEST_CASE("adaptive mode lowers the rate when energy drops") {
  Scenario sc = two_node_scenario();
  sc.adaptive = true;
  sc.duration = 3000;
  sc.cost_model.push_send_cost = 0.05;
  SimTrace trace = run(sc);
  double min_rate = 1e9;
  for (const StepRecord& rec : trace.records)
    for (const auto& [key, lr] : rec.links)
      min_rate = std::min(min_rate, lr.rate);
  CHECK(min_rate < sc.static_rate);
}

TEST_CASE("determinism: identical scenario and seed, identical trace") {
  Scenario sc = two_node_scenario();
  sc.adaptive = true;
  CHECK(run(sc) == run(sc));
}

TEST_CASE("energy is non-increasing and within [0,100]") {
  Scenario sc = two_node_scenario();
  sc.duration = 500;
  SimTrace trace = run(sc);
  for (const std::string& node : trace.node_ids) {
    double prev = 1e9;
    for (const StepRecord& rec : trace.records) {
      double e = rec.nodes.at(node).energy;
      CHECK(e >= 0);
      CHECK(e <= 100);
      CHECK(e <= prev + 1e-12);
      prev = e;
    }
  }
}

TEST_CASE("per-link conservation on every step") {
  Scenario sc = two_node_scenario();
  sc.stochastic.lambda = 3;
  sc.queue_bound = 5;
  sc.duration = 300;
  SimTrace trace = run(sc);
  for (const LinkKey& key : trace.link_ids) {
    int prev_queue = trace.records.front().links.at(key).queue_len;
    for (std::size_t i = 1; i < trace.records.size(); ++i) {
      const LinkStepRecord& lr = trace.records[i].links.at(key);
      CHECK(lr.offered ==
            lr.transferred + (lr.queue_len - prev_queue) + lr.dropped);
      prev_queue = lr.queue_len;
    }
  }
}

TEST_CASE("transfers never exceed rate or bandwidth caps") {
  Scenario sc = two_node_scenario();
  sc.stochastic.lambda = 10;
  sc.stochastic.bandwidth_mean = 3;
  sc.stochastic.bandwidth_sigma = 2;
  sc.adaptive = true;
  sc.duration = 500;
  SimTrace trace = run(sc);
  for (std::size_t i = 1; i < trace.records.size(); ++i)
    for (const auto& [key, lr] : trace.records[i].links) {
      CHECK(lr.transferred <= std::ceil(lr.rate * sc.dt));
      CHECK(lr.transferred <= std::floor(lr.bandwidth * sc.dt + 1e-9));
    }
}

TEST_CASE("dead node stops sending and receiving") {
  Scenario sc = two_node_scenario();
  sc.cost_model.push_send_cost = 2.0;  // producer dies fast
  sc.cost_model.pull_transfer_cost = 2.0;
  sc.duration = 300;
  SimTrace trace = run(sc);
  bool died = false;
  for (std::size_t i = 1; i < trace.records.size(); ++i) {
    const StepRecord& rec = trace.records[i];
    if (rec.nodes.at("A").energy <= 0) died = true;
    if (died && i + 1 < trace.records.size()) {
      const StepRecord& next = trace.records[i + 1];
      CHECK(next.nodes.at("A").msgs_sent == 0);
      for (const auto& [key, lr] : next.links) CHECK(lr.transferred == 0);
    }
  }
  CHECK(died);
  // The run continues to the full duration after the death.
  CHECK(trace.records.back().time == doctest::Approx(300.0));
}

TEST_CASE("lifetime") {
  Scenario sc = two_node_scenario();
  sc.stochastic.lambda = 0;
  sc.cost_model.inactive_cost = 0;
  sc.cost_model.active_base_cost = 2.0;
  sc.cost_model.idle_cost = 0.5;  // pure idle drain, closed form 100/0.5
  sc.duration = 400;
  SimTrace trace = run(sc);
  CHECK(lifetime(trace, "A") == doctest::Approx(200.0));
  CHECK_THROWS_AS(lifetime(trace, "Z"), Error);

  SUBCASE("node that never dies reports the duration") {
    sc.cost_model.idle_cost = 0.001;
    SimTrace alive = run(sc);
    CHECK(lifetime(alive, "A") == doctest::Approx(400.0));
  }
}

TEST_CASE("compare") {
  Scenario sc = two_node_scenario();
  sc.cost_model.inactive_cost = 0;
  sc.cost_model.active_base_cost = 2.0;
  sc.cost_model.idle_cost = 0.5;
  sc.stochastic.lambda = 0;
  sc.duration = 400;
  SUBCASE("identical traces give zero deltas") {
    SimTrace a = run(sc);
    LifetimeReport rep = compare(a, a);
    for (const auto& [node, lt] : rep.nodes) {
      CHECK(lt.delta_seconds == 0);
      CHECK(lt.delta_percent == 0);
    }
  }
  SUBCASE("delta arithmetic: 100 vs 128 seconds is 28%") {
    Scenario fast = sc;
    fast.cost_model.idle_cost = 1.0;  // dies at 100 s
    Scenario slow = sc;
    slow.cost_model.idle_cost = 0.78125;  // dies at exactly 128 s
    SimTrace st = run(fast);
    SimTrace ad = run(slow);
    ad.adaptive = true;
    LifetimeReport rep = compare(ad, st);
    CHECK(rep.nodes.at("A").alive_until_static == doctest::Approx(100.0));
    CHECK(rep.nodes.at("A").alive_until_adaptive == doctest::Approx(128.0));
    CHECK(rep.nodes.at("A").delta_percent == doctest::Approx(28.0));
  }
  SUBCASE("mismatched node sets are rejected") {
    SimTrace a = run(sc);
    SimTrace b = a;
    b.node_ids.pop_back();
    CHECK_THROWS_AS(compare(a, b), Error);
  }
}

TEST_CASE("scheduled weight override changes adaptation") {
  Scenario sc = two_node_scenario();
  sc.adaptive = true;
  sc.duration = 100;
  sc.stochastic.lambda = 0.5;
  // Crush the bandwidth factor for B mid-run: with gamma huge and the
  // bandwidth band low, B's global rate collapses.
  sc.stochastic.bandwidth_mean = 20;  // 20% of capacity -> bottom band
  ScheduledEvent ev;
  ev.type = ScheduledEvent::Type::Weights;
  ev.time = 50;
  ev.node = "B";
  ev.alpha = 0;
  ev.beta = 0;
  ev.gamma = 100;
  ev.mu = 0;
  sc.events.push_back(ev);
  SimTrace trace = run(sc);
  double early = trace.records[40].links.at("A.C->B.C:D").rate;
  double late = trace.records[80].links.at("A.C->B.C:D").rate;
  CHECK(late < early);
  CHECK(late == doctest::Approx(0.1));  // pure bandwidth factor, bottom band
}

TEST_CASE("scenario validation errors") {
  Scenario sc = two_node_scenario();
  SUBCASE("bad dt") {
    sc.dt = 0;
    CHECK_THROWS_AS(run(sc), Error);
  }
  SUBCASE("adaptation interval below dt") {
    sc.adaptation_interval = 0.5;
    CHECK_THROWS_AS(run(sc), Error);
  }
  SUBCASE("zero-weight profile") {
    sc.profiles["default"].alpha = 0;
    sc.profiles["default"].beta = 0;
    sc.profiles["default"].gamma = 0;
    sc.profiles["default"].mu = 0;
    CHECK_THROWS_AS(run(sc), Error);
  }
  SUBCASE("unrefined graph") {
    sc.graph = sc.abstract;
    CHECK_THROWS_AS(run(sc), Error);
  }
}
