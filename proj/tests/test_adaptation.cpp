#include <doctest.h>

#include <random>

#include "adaptsim/adaptation.hpp"
#include "adaptsim/error.hpp"
#include "adaptsim/refinement.hpp"

using namespace adaptsim;

namespace {

NodeProfile profile(double a, double b, double g, double m) {
  NodeProfile p;
  p.alpha = a;
  p.beta = b;
  p.gamma = g;
  p.mu = m;
  p.energy_scale = default_scale(1.0, 0.5, 0.1);
  p.memory_scale = default_scale(1.0, 0.5, 0.1);
  p.bandwidth_scale = default_scale(1.0, 0.5, 0.1);
  p.priority_scale = default_priority_scale(1.0);
  return p;
}

}  // namespace

TEST_CASE("lookup_rate on the default energy scale") {
  ThresholdScale scale = default_scale(1.0, 0.5, 0.1);
  CHECK(lookup_rate(scale, 90) == 1.0);   // PR1
  CHECK(lookup_rate(scale, 60) == 0.5);   // PR2
  CHECK(lookup_rate(scale, 10) == 0.1);   // PR3
  CHECK(lookup_rate(scale, 100) == 1.0);  // top band is closed at 100
  CHECK(lookup_rate(scale, 0) == 0.1);
  CHECK(lookup_rate(scale, 80) == 1.0);   // band lower bounds are inclusive
  CHECK(lookup_rate(scale, 40) == 0.5);
}

TEST_CASE("lookup_rate rejects out-of-domain values") {
  ThresholdScale scale = default_scale(1.0, 0.5, 0.1);
  CHECK_THROWS_AS(lookup_rate(scale, -0.1), Error);
  CHECK_THROWS_AS(lookup_rate(scale, 100.1), Error);
}

TEST_CASE("lookup_rate is total on [0,100]") {
  ThresholdScale scale = default_scale(1.0, 0.5, 0.1);
  for (int i = 0; i <= 10000; ++i) {
    double v = i * 0.01;
    double r = lookup_rate(scale, v);
    // Every grid point maps to exactly one band's rate.
    int matches = 0;
    for (const Band& b : scale.bands)
      if (r == b.rate && v >= b.lower &&
          (v < b.upper || (&b == &scale.bands.back() && v <= b.upper)))
        ++matches;
    CHECK(matches == 1);
  }
}

TEST_CASE("malformed scales are rejected") {
  CHECK_THROWS_AS((ThresholdScale{{{0, 40, 0.1}, {50, 100, 1.0}}}.check()),
                  Error);  // gap
  CHECK_THROWS_AS((ThresholdScale{{{0, 90, 0.1}}}.check()), Error);  // short
  CHECK_THROWS_AS((ThresholdScale{{}}.check()), Error);
}

TEST_CASE("global_rate") {
  SUBCASE("constant rates give that rate") {
    CHECK(global_rate(profile(3, 1, 2, 0.5), {0.7, 0.7, 0.7, 0.7}) ==
          doctest::Approx(0.7).epsilon(1e-12));
  }
  SUBCASE("equal weights give the arithmetic mean") {
    CHECK(global_rate(profile(1, 1, 1, 1), {1.0, 0.5, 0.5, 0.0}) ==
          doctest::Approx(0.5));
  }
  SUBCASE("weighted case, hand-computed") {
    // (2*1.0 + 0.5 + 0.5 + 0.1) / 5 = 0.62
    CHECK(global_rate(profile(2, 1, 1, 1), {1.0, 0.5, 0.5, 0.1}) ==
          doctest::Approx(0.62).epsilon(1e-12));
  }
  SUBCASE("zero weight sum rejected") {
    CHECK_THROWS_AS(global_rate(profile(0, 0, 0, 0), {1, 1, 1, 1}), Error);
  }
}

TEST_CASE("global_rate properties over random inputs") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> w(0.01, 10.0);
  std::uniform_real_distribution<double> r(0.0, 5.0);
  for (int i = 0; i < 10000; ++i) {
    NodeProfile p = profile(w(rng), w(rng), w(rng), w(rng));
    FactorRates rates{r(rng), r(rng), r(rng), r(rng)};
    double gr = global_rate(p, rates);
    double lo = std::min({rates.er, rates.mr, rates.br, rates.pr_link});
    double hi = std::max({rates.er, rates.mr, rates.br, rates.pr_link});
    CHECK(gr >= lo - 1e-12);
    CHECK(gr <= hi + 1e-12);
    // Weight scale invariance.
    double c = w(rng);
    NodeProfile scaled = p;
    scaled.alpha *= c;
    scaled.beta *= c;
    scaled.gamma *= c;
    scaled.mu *= c;
    CHECK(global_rate(scaled, rates) ==
          doctest::Approx(gr).epsilon(1e-12));
  }
}

TEST_CASE("negotiate") {
  CHECK(negotiate(0.62, 0.5) == 0.5);
  CHECK(negotiate(0.7, 0.7) == 0.7);
  CHECK(negotiate(0.0, 42.0) == 0.0);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> r(0.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    double a = r(rng), b = r(rng);
    CHECK(negotiate(a, b) == negotiate(b, a));
    CHECK(negotiate(a, b) <= a);
    CHECK(negotiate(a, b) <= b);
  }
}

namespace {

ContextSnapshot ctx_for(const Link& link, double ea, double eb, double ma,
                        double mb, double bw) {
  ContextSnapshot ctx;
  ctx.energy = {{"A", ea}, {"B", eb}};
  ctx.memory = {{"A", ma}, {"B", mb}};
  ctx.bandwidth[link.from + "->" + link.to + ":" + to_string(link.kind)] = bw;
  return ctx;
}

Link inter_link() {
  Link l;
  l.from = "A.C";
  l.to = "B.C";
  l.kind = DataKind::D;
  l.mode = InteractionMode::Push;
  l.scope = LinkScope::InterNode;
  return l;
}

}  // namespace

TEST_CASE("adapt_link") {
  Link link = inter_link();
  NodeProfile p = profile(1, 1, 1, 1);

  SUBCASE("all factors in the top band give PR1") {
    Link out = adapt_link(link, "A", "B", ctx_for(link, 90, 90, 90, 90, 100),
                          p, p, 100);
    CHECK(*out.negotiated_rate == doctest::Approx(1.0));
  }
  SUBCASE("one weak endpoint pulls the minimum down") {
    // A: er=0.1, others 1.0 -> GR_A = 3.1/4 = 0.775; GR_B = 1.0.
    Link out = adapt_link(link, "A", "B", ctx_for(link, 10, 90, 90, 90, 100),
                          p, p, 100);
    CHECK(*out.negotiated_rate == doctest::Approx(0.775).epsilon(1e-12));
  }
  SUBCASE("identical context at both ends gives GR itself") {
    Link out = adapt_link(link, "A", "B", ctx_for(link, 60, 60, 60, 60, 100),
                          p, p, 100);
    // er=mr=0.5, br=pr=1 -> GR = 0.75 at both ends.
    CHECK(*out.negotiated_rate == doctest::Approx(0.75).epsilon(1e-12));
  }
  SUBCASE("missing context entry") {
    ContextSnapshot ctx = ctx_for(link, 90, 90, 90, 90, 100);
    ctx.energy.erase("B");
    CHECK_THROWS_AS(adapt_link(link, "A", "B", ctx, p, p, 100), Error);
  }
  SUBCASE("raising a factor never lowers the negotiated rate") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> pct(0.0, 100.0);
    for (int i = 0; i < 2000; ++i) {
      double ea = pct(rng), eb = pct(rng), ma = pct(rng), mb = pct(rng);
      double bw = pct(rng);
      double base = *adapt_link(link, "A", "B",
                                ctx_for(link, ea, eb, ma, mb, bw), p, p, 100)
                         .negotiated_rate;
      double bumped =
          *adapt_link(link, "A", "B",
                      ctx_for(link, std::min(100.0, ea + 20), eb, ma, mb, bw),
                      p, p, 100)
               .negotiated_rate;
      CHECK(bumped >= base - 1e-12);
    }
  }
}

TEST_CASE("apply_activation hysteresis") {
  ArchGraph g = refine(build_abstract({{"N", ""}, {"M", ""}},
                                      {{"N", "M", DataKind::P, 0},
                                       {"N", "M", DataKind::D, 1}}),
                       StyleChoice::Direct);
  ActivationPolicy policy{20, 30};
  auto set_active = [&](const std::string& id, bool on) {
    for (Entity& e : g.entities)
      if (e.id == id) e.active = on;
  };
  auto energy_ctx = [&](double e) {
    ContextSnapshot ctx;
    ctx.energy = {{"N", e}, {"M", e}};
    return ctx;
  };

  SUBCASE("trace 25 -> 15 -> 35") {
    // 25 is inside the gap: stays active.
    auto a = apply_activation(g, "M", energy_ctx(25), policy);
    CHECK(a.at("M.T_P") == true);
    // 15 deactivates.
    a = apply_activation(g, "M", energy_ctx(15), policy);
    CHECK(a.at("M.T_P") == false);
    set_active("M.T_P", false);
    // 25 again: stays off inside the gap.
    a = apply_activation(g, "M", energy_ctx(25), policy);
    CHECK(a.at("M.T_P") == false);
    // 35 reactivates.
    a = apply_activation(g, "M", energy_ctx(35), policy);
    CHECK(a.at("M.T_P") == true);
  }
  SUBCASE("T_D is never deactivated by the policy") {
    auto a = apply_activation(g, "M", energy_ctx(1), policy);
    CHECK(a.at("M.T_D") == true);
    CHECK(a.at("M.C") == true);
  }
  SUBCASE("top of the scale keeps T_P active") {
    auto a = apply_activation(g, "M", energy_ctx(100), policy);
    CHECK(a.at("M.T_P") == true);
  }
  SUBCASE("fixed point under repeated application") {
    auto once = apply_activation(g, "M", energy_ctx(15), policy);
    for (Entity& e : g.entities) {
      auto it = once.find(e.id);
      if (it != once.end()) e.active = it->second;
    }
    CHECK(apply_activation(g, "M", energy_ctx(15), policy) == once);
  }
  SUBCASE("missing energy entry") {
    ContextSnapshot empty;
    CHECK_THROWS_AS(apply_activation(g, "M", empty, policy), Error);
  }
}
