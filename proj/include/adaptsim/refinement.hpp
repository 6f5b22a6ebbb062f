#ifndef ADAPTSIM_REFINEMENT_HPP
#define ADAPTSIM_REFINEMENT_HPP

#include "adaptsim/arch_graph.hpp"

namespace adaptsim {

enum class StyleChoice { Direct, Mediated };

/// Step 1: split each node into a communication entity plus the
/// processing entities for the data kinds it exchanges. No links yet.
ArchGraph decompose(const ArchGraph& abstract);

/// Steps 2-3, direct style: communication entities talk to processing
/// entities directly, one intra-node link per data kind; modes assigned.
ArchGraph refine_direct(const ArchGraph& decomposed);

/// Steps 2-3, mediated style: nodes exchanging more than one data kind
/// gain a dispatcher that filters kinds between the communication and
/// processing entities; modes assigned.
ArchGraph refine_mediated(const ArchGraph& decomposed);

ArchGraph refine(const ArchGraph& abstract, StyleChoice style);

/// Push for D, pull for P, on every link.
ArchGraph assign_modes(ArchGraph refined);

/// Processing entities incident to no link of their kind are switched off.
ArchGraph deactivate_unused(ArchGraph refined);

}  // namespace adaptsim

#endif
