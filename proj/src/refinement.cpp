#include "adaptsim/refinement.hpp"

#include <algorithm>
#include <set>

#include "adaptsim/error.hpp"

namespace adaptsim {

namespace {

EntityKind processing_kind(DataKind kind) {
  return kind == DataKind::D ? EntityKind::ProcessingD : EntityKind::ProcessingP;
}

std::set<DataKind> produced_kinds(const ArchGraph& g, const std::string& node) {
  std::set<DataKind> out;
  for (const FlowEdge& f : g.flows)
    if (f.producer == node) out.insert(f.kind);
  return out;
}

std::set<DataKind> consumed_kinds(const ArchGraph& g, const std::string& node) {
  std::set<DataKind> out;
  for (const FlowEdge& f : g.flows)
    if (f.consumer == node) out.insert(f.kind);
  return out;
}

void add_inter_node_links(ArchGraph& g) {
  for (const FlowEdge& f : g.flows) {
    Link l;
    l.from = entity_id(f.producer, EntityKind::Communication);
    l.to = entity_id(f.consumer, EntityKind::Communication);
    l.kind = f.kind;
    l.scope = LinkScope::InterNode;
    g.links.push_back(l);
  }
}

void add_intra_link(ArchGraph& g, const std::string& from,
                    const std::string& to, DataKind kind) {
  Link l;
  l.from = from;
  l.to = to;
  l.kind = kind;
  l.scope = LinkScope::IntraNode;
  g.links.push_back(l);
}

void require_decomposed(const ArchGraph& g) {
  if (g.level != GraphLevel::Refined || g.style != GraphStyle::Unrefined ||
      !g.links.empty())
    throw Error(ErrorCode::WrongLevel, "input is not a decomposed graph");
}

}  // namespace

ArchGraph decompose(const ArchGraph& abstract) {
  if (abstract.level != GraphLevel::Abstract)
    throw Error(ErrorCode::WrongLevel, "input graph is already refined");
  ArchGraph g = abstract;
  g.level = GraphLevel::Refined;
  g.style = GraphStyle::Unrefined;  // intermediate, no links yet
  for (const NodeRecord& n : g.nodes) {
    g.entities.push_back(
        {entity_id(n.id, EntityKind::Communication), n.id,
         EntityKind::Communication, true});
    std::set<DataKind> kinds = produced_kinds(abstract, n.id);
    std::set<DataKind> consumed = consumed_kinds(abstract, n.id);
    kinds.insert(consumed.begin(), consumed.end());
    for (DataKind k : kinds) {
      EntityKind ek = processing_kind(k);
      g.entities.push_back({entity_id(n.id, ek), n.id, ek, true});
    }
  }
  return g;
}

ArchGraph refine_direct(const ArchGraph& decomposed) {
  require_decomposed(decomposed);
  ArchGraph g = decomposed;
  add_inter_node_links(g);
  for (const NodeRecord& n : g.nodes) {
    std::string comm = entity_id(n.id, EntityKind::Communication);
    for (DataKind k : produced_kinds(g, n.id))
      add_intra_link(g, entity_id(n.id, processing_kind(k)), comm, k);
    for (DataKind k : consumed_kinds(g, n.id))
      add_intra_link(g, comm, entity_id(n.id, processing_kind(k)), k);
  }
  g.style = GraphStyle::Direct;
  return assign_modes(std::move(g));
}

ArchGraph refine_mediated(const ArchGraph& decomposed) {
  require_decomposed(decomposed);
  ArchGraph g = decomposed;
  add_inter_node_links(g);
  for (const NodeRecord& n : g.nodes) {
    std::set<DataKind> produced = produced_kinds(g, n.id);
    std::set<DataKind> consumed = consumed_kinds(g, n.id);
    std::set<DataKind> all = produced;
    all.insert(consumed.begin(), consumed.end());
    std::string comm = entity_id(n.id, EntityKind::Communication);

    // Filtering is vacuous for a single kind: no dispatcher, direct route.
    if (all.size() < 2) {
      for (DataKind k : produced)
        add_intra_link(g, entity_id(n.id, processing_kind(k)), comm, k);
      for (DataKind k : consumed)
        add_intra_link(g, comm, entity_id(n.id, processing_kind(k)), k);
      continue;
    }

    std::string dsp = entity_id(n.id, EntityKind::Dispatcher);
    g.entities.push_back({dsp, n.id, EntityKind::Dispatcher, true});
    for (DataKind k : produced) {
      add_intra_link(g, entity_id(n.id, processing_kind(k)), dsp, k);
      add_intra_link(g, dsp, comm, k);
    }
    for (DataKind k : consumed) {
      add_intra_link(g, comm, dsp, k);
      add_intra_link(g, dsp, entity_id(n.id, processing_kind(k)), k);
    }
  }
  g.style = GraphStyle::Mediated;
  return assign_modes(std::move(g));
}

ArchGraph refine(const ArchGraph& abstract, StyleChoice style) {
  ArchGraph d = decompose(abstract);
  ArchGraph r = style == StyleChoice::Direct ? refine_direct(d)
                                             : refine_mediated(d);
  return deactivate_unused(std::move(r));
}

ArchGraph assign_modes(ArchGraph refined) {
  for (Link& l : refined.links)
    l.mode = l.kind == DataKind::D ? InteractionMode::Push
                                   : InteractionMode::Pull;
  return refined;
}

ArchGraph deactivate_unused(ArchGraph refined) {
  for (Entity& e : refined.entities) {
    DataKind kind;
    if (e.kind == EntityKind::ProcessingD)
      kind = DataKind::D;
    else if (e.kind == EntityKind::ProcessingP)
      kind = DataKind::P;
    else
      continue;
    bool used = std::any_of(
        refined.links.begin(), refined.links.end(), [&](const Link& l) {
          return l.kind == kind && (l.from == e.id || l.to == e.id);
        });
    if (!used) e.active = false;
  }
  return refined;
}

}  // namespace adaptsim
