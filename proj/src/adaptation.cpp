#include "adaptsim/adaptation.hpp"

#include <algorithm>
#include <cmath>

#include "adaptsim/error.hpp"

namespace adaptsim {

void ThresholdScale::check() const {
  if (bands.empty())
    throw Error(ErrorCode::InvalidParam, "threshold scale has no bands");
  double expected = 0;
  for (const Band& b : bands) {
    if (b.lower != expected)
      throw Error(ErrorCode::InvalidParam,
                  "scale bands must tile [0,100]: gap or overlap at " +
                      std::to_string(b.lower));
    if (b.upper <= b.lower)
      throw Error(ErrorCode::InvalidParam, "empty scale band");
    if (b.rate < 0 || !std::isfinite(b.rate))
      throw Error(ErrorCode::InvalidParam, "negative or non-finite band rate");
    expected = b.upper;
  }
  if (expected != 100)
    throw Error(ErrorCode::InvalidParam, "scale must end at 100");
}

ThresholdScale default_scale(double pr1, double pr2, double pr3) {
  return {{{0, 40, pr3}, {40, 80, pr2}, {80, 100, pr1}}};
}

ThresholdScale default_priority_scale(double pr1) {
  return {{{0, 50, pr1}, {50, 100, pr1}}};
}

double priority_percent(int priority_degree) {
  return priority_degree == 0 ? 100.0 : 0.0;
}

double lookup_rate(const ThresholdScale& scale, double value) {
  if (!(value >= 0 && value <= 100))
    throw Error(ErrorCode::OutOfDomain,
                "factor value " + std::to_string(value) + " not in [0,100]");
  for (const Band& b : scale.bands) {
    bool top = &b == &scale.bands.back();
    if (value >= b.lower && (value < b.upper || (top && value <= b.upper)))
      return b.rate;
  }
  throw Error(ErrorCode::InvalidParam, "scale does not cover [0,100]");
}

double global_rate(const NodeProfile& profile, const FactorRates& rates) {
  double sum = profile.alpha + profile.beta + profile.gamma + profile.mu;
  if (!(sum > 0) || profile.alpha < 0 || profile.beta < 0 ||
      profile.gamma < 0 || profile.mu < 0)
    throw Error(ErrorCode::InvalidProfile,
                "weights must be non-negative with positive sum");
  return (profile.alpha * rates.er + profile.beta * rates.mr +
          profile.gamma * rates.br + profile.mu * rates.pr_link) /
         sum;
}

double negotiate(double gr_a, double gr_b) {
  return std::min(gr_a, gr_b);
}

FactorRates factor_rates(const NodeProfile& profile, const std::string& node,
                         const Link& link, const ContextSnapshot& ctx,
                         double link_capacity) {
  LinkKey key = link.from + "->" + link.to + ":" + to_string(link.kind);
  double bw = ctx.link_bandwidth(key);
  double bw_pct =
      link_capacity > 0 ? std::min(100.0, 100.0 * bw / link_capacity) : 100.0;
  FactorRates r;
  r.er = lookup_rate(profile.energy_scale, ctx.node_energy(node));
  r.mr = lookup_rate(profile.memory_scale, ctx.node_memory(node));
  r.br = lookup_rate(profile.bandwidth_scale, bw_pct);
  r.pr_link = lookup_rate(profile.priority_scale,
                          priority_percent(ctx.link_priority(key)));
  return r;
}

Link adapt_link(const Link& link, const std::string& node_a,
                const std::string& node_b, const ContextSnapshot& ctx,
                const NodeProfile& profile_a, const NodeProfile& profile_b,
                double link_capacity) {
  double gr_a =
      global_rate(profile_a, factor_rates(profile_a, node_a, link, ctx,
                                          link_capacity));
  double gr_b =
      global_rate(profile_b, factor_rates(profile_b, node_b, link, ctx,
                                          link_capacity));
  Link out = link;
  out.negotiated_rate = negotiate(gr_a, gr_b);
  return out;
}

std::map<std::string, bool> apply_activation(const ArchGraph& graph,
                                             const std::string& node,
                                             const ContextSnapshot& ctx,
                                             const ActivationPolicy& policy) {
  if (graph.level != GraphLevel::Refined)
    throw Error(ErrorCode::WrongLevel, "graph is not refined");
  if (!graph.has_node(node))
    throw Error(ErrorCode::UnknownNode, "'" + node + "'");
  double energy = ctx.node_energy(node);
  std::map<std::string, bool> out;
  for (const Entity& e : graph.entities) {
    if (e.owner != node) continue;
    bool active = e.active;
    bool structurally_used = std::any_of(
        graph.links.begin(), graph.links.end(), [&](const Link& l) {
          return l.kind == DataKind::P && (l.from == e.id || l.to == e.id);
        });
    if (e.kind == EntityKind::ProcessingP && structurally_used) {
      if (energy < policy.deactivate_below)
        active = false;
      else if (energy > policy.reactivate_above)
        active = true;
      // In the hysteresis gap the current state is kept.
    }
    out[e.id] = active;
  }
  return out;
}

}  // namespace adaptsim
