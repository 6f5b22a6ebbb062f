#ifndef ADAPTSIM_ADAPTATION_HPP
#define ADAPTSIM_ADAPTATION_HPP

#include <map>
#include <string>
#include <vector>

#include "adaptsim/arch_graph.hpp"
#include "adaptsim/context.hpp"

namespace adaptsim {

/// One band of a threshold scale: [lower, upper) in percent, except the
/// top band which also contains 100.
struct Band {
  double lower = 0;
  double upper = 100;
  double rate = 0;  // messages/second

  bool operator==(const Band&) const = default;
};

/// Ordered bands covering [0,100] exactly, mapping a context factor
/// percentage to a required rate.
struct ThresholdScale {
  std::vector<Band> bands;

  bool operator==(const ThresholdScale&) const = default;

  /// Throws InvalidParam if bands are unsorted, overlapping or leave gaps.
  void check() const;
};

/// Per-node adaptation behaviour: factor weights plus one scale per factor.
struct NodeProfile {
  double alpha = 1;  // energy weight
  double beta = 1;   // memory weight
  double gamma = 1;  // bandwidth weight
  double mu = 1;     // link-priority weight
  ThresholdScale energy_scale;
  ThresholdScale memory_scale;
  ThresholdScale bandwidth_scale;
  ThresholdScale priority_scale;

  bool operator==(const NodeProfile&) const = default;
};

struct FactorRates {
  double er = 0;
  double mr = 0;
  double br = 0;
  double pr_link = 0;
};

struct ActivationPolicy {
  double deactivate_below = 20;   // energy percent
  double reactivate_above = 30;

  bool operator==(const ActivationPolicy&) const = default;
};

/// Default three-band scale built from the three named rates,
/// [0,40)->pr3, [40,80)->pr2, [80,100]->pr1.
ThresholdScale default_scale(double pr1, double pr2, double pr3);

/// Default two-band priority scale; both bands yield pr1 until an
/// operator overrides them.
ThresholdScale default_priority_scale(double pr1);

/// Priority degree mapped onto the [0,100] scale domain: degree 0 reads
/// the top band, any prioritized link reads the bottom band.
double priority_percent(int priority_degree);

double lookup_rate(const ThresholdScale& scale, double value);

double global_rate(const NodeProfile& profile, const FactorRates& rates);

double negotiate(double gr_a, double gr_b);

/// Factor rates of one endpoint for one link, from the node's own scales,
/// its energy/memory context and the shared link bandwidth/priority.
FactorRates factor_rates(const NodeProfile& profile, const std::string& node,
                         const Link& link, const ContextSnapshot& ctx,
                         double link_capacity);

/// Re-negotiates one inter-node link: min of the two endpoint global rates.
Link adapt_link(const Link& link, const std::string& node_a,
                const std::string& node_b, const ContextSnapshot& ctx,
                const NodeProfile& profile_a, const NodeProfile& profile_b,
                double link_capacity);

/// Hysteresis on the low-priority processing entity: off below
/// deactivate_below, on above reactivate_above, unchanged in between.
/// Returns the new activation per entity of the node.
std::map<std::string, bool> apply_activation(const ArchGraph& graph,
                                             const std::string& node,
                                             const ContextSnapshot& ctx,
                                             const ActivationPolicy& policy);

}  // namespace adaptsim

#endif
