#ifndef ADAPTSIM_ARCH_GRAPH_HPP
#define ADAPTSIM_ARCH_GRAPH_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace adaptsim {

/// The two data kinds exchanged by the application. D is the
/// high-priority kind, P the low-priority one.
enum class DataKind { D, P };

const char* to_string(DataKind kind);
int default_priority(DataKind kind);  // D=1, P=0

/// Node-to-node typed flow at the abstract level.
struct FlowEdge {
  std::string producer;
  std::string consumer;
  DataKind kind = DataKind::D;
  int priority = 0;

  bool operator==(const FlowEdge&) const = default;
};

enum class EntityKind { Communication, ProcessingD, ProcessingP, Dispatcher };

const char* to_string(EntityKind kind);

/// Entity ids are deterministic: "<node>.C", "<node>.T_D", "<node>.T_P",
/// "<node>.DSP". Repeated refinement of the same graph is reproducible.
std::string entity_id(const std::string& node, EntityKind kind);

struct Entity {
  std::string id;
  std::string owner;
  EntityKind kind = EntityKind::Communication;
  bool active = true;

  bool operator==(const Entity&) const = default;
};

enum class InteractionMode { Push, Pull };

const char* to_string(InteractionMode mode);

enum class LinkScope { IntraNode, InterNode };

/// Entity-to-entity link of the refined level.
struct Link {
  std::string from;  // entity id
  std::string to;    // entity id
  DataKind kind = DataKind::D;
  InteractionMode mode = InteractionMode::Push;
  int priority_degree = 0;  // initially zero
  std::optional<double> negotiated_rate;  // messages/second
  LinkScope scope = LinkScope::IntraNode;

  bool operator==(const Link&) const = default;
};

struct NodeRecord {
  std::string id;
  std::string role;

  bool operator==(const NodeRecord&) const = default;
};

enum class GraphLevel { Abstract, Refined };
enum class GraphStyle { Unrefined, Direct, Mediated };

const char* to_string(GraphStyle style);

struct Violation {
  std::string invariant;  // e.g. "D-must-push"
  std::string element;    // offending node/entity/link

  bool operator==(const Violation&) const = default;
};

/// Two-level architecture model. Abstract graphs carry nodes and flows
/// only; refined graphs additionally carry entities and links. Values
/// are immutable by convention: transformations return new graphs.
struct ArchGraph {
  GraphLevel level = GraphLevel::Abstract;
  GraphStyle style = GraphStyle::Unrefined;
  std::vector<NodeRecord> nodes;
  std::vector<Entity> entities;
  std::vector<FlowEdge> flows;
  std::vector<Link> links;

  bool operator==(const ArchGraph&) const = default;

  bool has_node(const std::string& id) const;
  const Entity* find_entity(const std::string& id) const;
  /// Entity of the given node and kind, or nullptr.
  const Entity* node_entity(const std::string& node, EntityKind kind) const;
};

ArchGraph build_abstract(const std::vector<NodeRecord>& nodes,
                         const std::vector<FlowEdge>& flows);

std::vector<Violation> validate(const ArchGraph& graph);

std::set<std::string> active_entities(const ArchGraph& graph,
                                      const std::string& node);

/// Graphviz export, one box per entity, edges labelled "kind/mode/rate".
std::string to_dot(const ArchGraph& graph);

}  // namespace adaptsim

#endif
