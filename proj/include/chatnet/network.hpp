#pragma once

// Chatrooms arranged as an ordered tree: every non-terminal agent and her
// immediate successors share one chatroom. The cascade is solved top-down
// from the root, and undirected social graphs can be rooted at any agent.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chatnet/chatroom.hpp"
#include "chatnet/sender.hpp"

namespace chatnet {

class OrderedTree {
 public:
  // parents[i] is empty for exactly one agent, the root. Throws
  // ModelError(kInvalidTree) on cycles, multiple roots or bad indices.
  OrderedTree(std::vector<std::string> names,
              std::vector<std::optional<std::size_t>> parents);

  // Edges are (parent, child) pairs of agent names.
  static OrderedTree from_edges(
      std::vector<std::string> names, const std::string& root,
      std::span<const std::pair<std::string, std::string>> edges);

  std::size_t size() const noexcept { return names_.size(); }
  std::size_t root() const noexcept { return root_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::span<const std::string> names() const noexcept { return names_; }
  std::optional<std::size_t> parent(std::size_t i) const { return parents_.at(i); }
  std::span<const std::size_t> children(std::size_t i) const {
    return children_.at(i);
  }
  bool terminal(std::size_t i) const { return children_.at(i).empty(); }
  std::optional<std::size_t> find(std::string_view name) const;

  // Breadth-first order starting at the root.
  std::vector<std::size_t> bfs_order() const;

 private:
  std::vector<std::string> names_;
  std::vector<std::optional<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::size_t root_ = 0;
};

struct Chatroom {
  std::size_t sender;
  std::vector<std::size_t> receivers;
};

// One chatroom per non-terminal agent, in breadth-first order.
std::vector<Chatroom> chatrooms_of(const OrderedTree& tree);

struct AgentParams {
  TypeSet types;
  double lambda = 0.0;
  int ell = 1;
};

// receiving: over the other members of the agent's receiving chatroom,
// parent first then siblings in child order. sending: over the agent's
// children in child order.
struct AgentBeliefs {
  std::optional<SecondOrderBelief> receiving;
  std::optional<SecondOrderBelief> sending;
};

// Point-mass beliefs on the true credences of the relevant agents. Every
// agent must have a singleton type set; throws ModelError(kInvalidGame)
// otherwise.
std::vector<AgentBeliefs> dirac_truth_beliefs(
    const OrderedTree& tree, std::span<const AgentParams> params);

// The chatroom game led by `sender`.
ChatroomGame chatroom_game(const OrderedTree& tree, std::size_t sender,
                           std::span<const AgentParams> params,
                           std::span<const AgentBeliefs> beliefs);

struct CascadeResult {
  // Empty for the root and for agents the message never reached.
  std::vector<std::optional<ReceiverAction>> receiver_action;
  // Present for reached non-terminal agents.
  std::vector<std::optional<SenderAction>> sender_action;
  std::vector<bool> reached;
  Multiplicity status = Multiplicity::kUnique;
  // Senders whose chatroom admitted more than one equilibrium reaction.
  std::vector<std::size_t> multiple_chatrooms;
  // Sender of the first reached chatroom without an equilibrium.
  std::optional<std::size_t> failing_chatroom;

  std::size_t reach_count() const;
  bool has_equilibrium() const { return status != Multiplicity::kNone; }
};

CascadeResult solve_global(const OrderedTree& tree, const EvidenceRelation& mu,
                           std::span<const AgentParams> params,
                           std::span<const AgentBeliefs> beliefs,
                           double tolerance = kTolerance);

class SocialGraph {
 public:
  explicit SocialGraph(std::vector<std::string> names);
  static SocialGraph from_edges(
      std::vector<std::string> names,
      std::span<const std::pair<std::string, std::string>> edges);

  void add_edge(std::size_t a, std::size_t b);
  bool has_edge(std::size_t a, std::size_t b) const;
  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::span<const std::string> names() const noexcept { return names_; }
  // Sorted; includes i itself only if a self-loop was added.
  std::span<const std::size_t> neighbors(std::size_t i) const {
    return adjacency_.at(i);
  }
  std::optional<std::size_t> find(std::string_view name) const;
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

enum class GraphViolation { kNone, kDisconnected, kSelfLoop, kT2, kT1 };

std::string_view to_string(GraphViolation v);

struct GraphCheck {
  GraphViolation violation = GraphViolation::kNone;
  // kDisconnected: (reached, unreached); kSelfLoop: (i);
  // kT2: (i, j, j', k); kT1: (i, j, j').
  std::vector<std::size_t> witness;

  bool valid() const { return violation == GraphViolation::kNone; }
  std::string describe(const SocialGraph& graph) const;
};

// Structural conditions under which rooting at any agent yields an ordered
// tree: connected, no self-loops, no agent k outside i's neighbourhood
// adjacent to two of i's neighbours (T2), and neighbours of i that remain
// connected without i are adjacent (T1; every chatroom is a clique).
GraphCheck validate_graph(const SocialGraph& graph);

// Layer peeling from `root`: the root's successors are her neighbours; the
// successors of a child are her neighbours outside the parent's closed
// neighbourhood. Throws ModelError(kInvalidGraph) with the witness.
OrderedTree root_tree(const SocialGraph& graph, std::size_t root);

// Each chatroom of the tree becomes a clique.
SocialGraph undirected_closure(const OrderedTree& tree);

using BeliefBuilder =
    std::function<std::vector<AgentBeliefs>(const OrderedTree&)>;

BeliefBuilder dirac_truth_builder(std::vector<AgentParams> params);

struct RootReach {
  std::size_t root;
  std::optional<CascadeResult> result;
  // Set when the rooting could not be solved (for example beliefs that do
  // not fit the rooted chatrooms).
  std::string error;

  std::size_t reach() const { return result ? result->reach_count() : 0; }
};

// Solves the cascade once per choice of root. Roots are evaluated on up to
// `threads` workers; output is in agent order.
std::vector<RootReach> reach_by_root(const SocialGraph& graph,
                                     const EvidenceRelation& mu,
                                     std::span<const AgentParams> params,
                                     const BeliefBuilder& builder,
                                     unsigned threads = 1,
                                     double tolerance = kTolerance);

}  // namespace chatnet
