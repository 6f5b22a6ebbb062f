#include "adaptsim/arch_graph.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "adaptsim/error.hpp"

namespace adaptsim {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateNode: return "DuplicateNode";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::WrongLevel: return "WrongLevel";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::MissingContext: return "MissingContext";
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::EmptyTrace: return "EmptyTrace";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ScenarioError: return "ScenarioError";
    case ErrorCode::IncomparableTraces: return "IncomparableTraces";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

const char* to_string(DataKind kind) {
  return kind == DataKind::D ? "D" : "P";
}

int default_priority(DataKind kind) {
  return kind == DataKind::D ? 1 : 0;
}

const char* to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::Communication: return "C";
    case EntityKind::ProcessingD: return "T_D";
    case EntityKind::ProcessingP: return "T_P";
    case EntityKind::Dispatcher: return "DSP";
  }
  return "?";
}

std::string entity_id(const std::string& node, EntityKind kind) {
  return node + "." + to_string(kind);
}

const char* to_string(InteractionMode mode) {
  return mode == InteractionMode::Push ? "push" : "pull";
}

const char* to_string(GraphStyle style) {
  switch (style) {
    case GraphStyle::Unrefined: return "unrefined";
    case GraphStyle::Direct: return "direct";
    case GraphStyle::Mediated: return "mediated";
  }
  return "?";
}

bool ArchGraph::has_node(const std::string& id) const {
  return std::any_of(nodes.begin(), nodes.end(),
                     [&](const NodeRecord& n) { return n.id == id; });
}

const Entity* ArchGraph::find_entity(const std::string& id) const {
  for (const Entity& e : entities)
    if (e.id == id) return &e;
  return nullptr;
}

const Entity* ArchGraph::node_entity(const std::string& node,
                                     EntityKind kind) const {
  for (const Entity& e : entities)
    if (e.owner == node && e.kind == kind) return &e;
  return nullptr;
}

ArchGraph build_abstract(const std::vector<NodeRecord>& nodes,
                         const std::vector<FlowEdge>& flows) {
  std::unordered_set<std::string> ids;
  for (const NodeRecord& n : nodes) {
    if (!ids.insert(n.id).second)
      throw Error(ErrorCode::DuplicateNode, "node id '" + n.id + "'");
  }
  for (const FlowEdge& f : flows) {
    if (!ids.count(f.producer))
      throw Error(ErrorCode::UnknownNode, "flow producer '" + f.producer + "'");
    if (!ids.count(f.consumer))
      throw Error(ErrorCode::UnknownNode, "flow consumer '" + f.consumer + "'");
    if (f.producer == f.consumer)
      throw Error(ErrorCode::InvalidParam,
                  "self-flow on node '" + f.producer + "'");
  }
  ArchGraph g;
  g.level = GraphLevel::Abstract;
  g.style = GraphStyle::Unrefined;
  g.nodes = nodes;
  g.flows = flows;
  return g;
}

namespace {

void check_entity_counts(const ArchGraph& g, std::vector<Violation>& out) {
  struct Counts {
    int comm = 0, td = 0, tp = 0, dsp = 0;
  };
  std::map<std::string, Counts> per_node;
  for (const NodeRecord& n : g.nodes) per_node[n.id];
  for (const Entity& e : g.entities) {
    auto it = per_node.find(e.owner);
    if (it == per_node.end()) {
      out.push_back({"entity-owner-unknown", e.id});
      continue;
    }
    switch (e.kind) {
      case EntityKind::Communication: it->second.comm++; break;
      case EntityKind::ProcessingD: it->second.td++; break;
      case EntityKind::ProcessingP: it->second.tp++; break;
      case EntityKind::Dispatcher: it->second.dsp++; break;
    }
  }
  for (const auto& [node, c] : per_node) {
    if (g.level == GraphLevel::Refined && c.comm != 1)
      out.push_back({"one-communication-per-node", node});
    if (c.td > 1) out.push_back({"at-most-one-processing-d", node});
    if (c.tp > 1) out.push_back({"at-most-one-processing-p", node});
    if (c.dsp > 1) out.push_back({"at-most-one-dispatcher", node});
  }
}

// Set of data kinds a node exchanges, from the abstract flows.
std::set<DataKind> node_kinds(const ArchGraph& g, const std::string& node) {
  std::set<DataKind> kinds;
  for (const FlowEdge& f : g.flows)
    if (f.producer == node || f.consumer == node) kinds.insert(f.kind);
  return kinds;
}

}  // namespace

std::vector<Violation> validate(const ArchGraph& graph) {
  std::vector<Violation> out;

  if (graph.level == GraphLevel::Abstract) {
    if (!graph.entities.empty())
      out.push_back({"abstract-has-entities", graph.entities.front().id});
    if (graph.style != GraphStyle::Unrefined)
      out.push_back({"abstract-must-be-unrefined", to_string(graph.style)});
    if (!graph.links.empty())
      out.push_back({"abstract-has-links", graph.links.front().from});
    for (const FlowEdge& f : graph.flows) {
      if (f.producer == f.consumer)
        out.push_back({"flow-self-loop", f.producer});
      if (!graph.has_node(f.producer))
        out.push_back({"flow-endpoint-unknown", f.producer});
      if (!graph.has_node(f.consumer))
        out.push_back({"flow-endpoint-unknown", f.consumer});
    }
    check_entity_counts(graph, out);
    return out;
  }

  // Refined level.
  check_entity_counts(graph, out);

  for (const Link& l : graph.links) {
    const Entity* from = graph.find_entity(l.from);
    const Entity* to = graph.find_entity(l.to);
    if (!from || !to) {
      out.push_back({"link-endpoint-unknown", l.from + "->" + l.to});
      continue;
    }
    if (l.kind == DataKind::D && l.mode != InteractionMode::Push)
      out.push_back({"D-must-push", l.from + "->" + l.to});
    if (l.kind == DataKind::P && l.mode != InteractionMode::Pull)
      out.push_back({"P-must-pull", l.from + "->" + l.to});
    bool inter = from->owner != to->owner;
    if (inter != (l.scope == LinkScope::InterNode))
      out.push_back({"link-scope-mismatch", l.from + "->" + l.to});
  }

  // Every abstract flow must be realized by an inter-node link of the
  // same kind between the two nodes.
  for (const FlowEdge& f : graph.flows) {
    bool realized = false;
    for (const Link& l : graph.links) {
      if (l.scope != LinkScope::InterNode || l.kind != f.kind) continue;
      const Entity* from = graph.find_entity(l.from);
      const Entity* to = graph.find_entity(l.to);
      if (from && to && from->owner == f.producer && to->owner == f.consumer) {
        realized = true;
        break;
      }
    }
    if (!realized)
      out.push_back({"flow-not-realized", f.producer + "->" + f.consumer +
                                              ":" + to_string(f.kind)});
  }

  if (graph.style == GraphStyle::Direct) {
    for (const Entity& e : graph.entities)
      if (e.kind == EntityKind::Dispatcher)
        out.push_back({"direct-has-dispatcher", e.id});
  } else if (graph.style == GraphStyle::Mediated) {
    for (const NodeRecord& n : graph.nodes) {
      bool multi = node_kinds(graph, n.id).size() > 1;
      bool has_dsp = graph.node_entity(n.id, EntityKind::Dispatcher) != nullptr;
      if (multi && !has_dsp)
        out.push_back({"mediated-missing-dispatcher", n.id});
      if (!multi && has_dsp)
        out.push_back({"mediated-extra-dispatcher", n.id});
    }
  } else {
    // Refined but style unset: only legal as the decompose intermediate,
    // which has no links yet.
    if (!graph.links.empty())
      out.push_back({"refined-style-unset", "graph"});
  }
  return out;
}

std::set<std::string> active_entities(const ArchGraph& graph,
                                      const std::string& node) {
  if (!graph.has_node(node))
    throw Error(ErrorCode::UnknownNode, "'" + node + "'");
  if (graph.level != GraphLevel::Refined)
    throw Error(ErrorCode::WrongLevel, "graph is not refined");
  std::set<std::string> out;
  for (const Entity& e : graph.entities)
    if (e.owner == node && e.active) out.insert(e.id);
  return out;
}

std::string to_dot(const ArchGraph& graph) {
  std::ostringstream os;
  os << "digraph arch {\n";
  os << "  rankdir=LR;\n";
  if (graph.level == GraphLevel::Abstract) {
    for (const NodeRecord& n : graph.nodes)
      os << "  \"" << n.id << "\" [label=\"" << n.id << "\\n" << n.role
         << "\"];\n";
    for (const FlowEdge& f : graph.flows)
      os << "  \"" << f.producer << "\" -> \"" << f.consumer << "\" [label=\""
         << to_string(f.kind) << "/" << f.priority << "\"];\n";
  } else {
    for (const NodeRecord& n : graph.nodes) {
      os << "  subgraph \"cluster_" << n.id << "\" {\n";
      os << "    label=\"" << n.id << " (" << n.role << ")\";\n";
      for (const Entity& e : graph.entities)
        if (e.owner == n.id)
          os << "    \"" << e.id << "\" [label=\"" << to_string(e.kind)
             << (e.active ? "" : " (off)") << "\", shape=box"
             << (e.active ? "" : ", style=dashed") << "];\n";
      os << "  }\n";
    }
    for (const Link& l : graph.links) {
      os << "  \"" << l.from << "\" -> \"" << l.to << "\" [label=\""
         << to_string(l.kind) << "/" << to_string(l.mode) << "/";
      if (l.negotiated_rate)
        os << *l.negotiated_rate;
      else
        os << "-";
      os << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace adaptsim
