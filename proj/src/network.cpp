#include "chatnet/network.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <map>
#include <sstream>
#include <thread>

namespace chatnet {

namespace {

std::size_t index_of(const std::map<std::string, std::size_t, std::less<>>& ids,
                     const std::string& name, ErrorKind kind) {
  const auto it = ids.find(name);
  if (it == ids.end()) throw ModelError(kind, "unknown agent '" + name + "'");
  return it->second;
}

std::map<std::string, std::size_t, std::less<>> name_index(
    std::span<const std::string> names, ErrorKind kind) {
  std::map<std::string, std::size_t, std::less<>> ids;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!ids.emplace(names[i], i).second) {
      throw ModelError(kind, "duplicate agent '" + names[i] + "'");
    }
  }
  return ids;
}

}  // namespace

// OrderedTree ----------------------------------------------------------------

OrderedTree::OrderedTree(std::vector<std::string> names,
                         std::vector<std::optional<std::size_t>> parents)
    : names_(std::move(names)), parents_(std::move(parents)) {
  const std::size_t n = names_.size();
  if (n == 0 || parents_.size() != n) {
    throw ModelError(ErrorKind::kInvalidTree,
                     "tree needs one parent entry per agent");
  }
  name_index(names_, ErrorKind::kInvalidTree);
  children_.assign(n, {});
  std::optional<std::size_t> root;
  for (std::size_t i = 0; i < n; ++i) {
    if (!parents_[i]) {
      if (root) throw ModelError(ErrorKind::kInvalidTree, "multiple roots");
      root = i;
      continue;
    }
    const std::size_t p = *parents_[i];
    if (p >= n || p == i) {
      throw ModelError(ErrorKind::kInvalidTree,
                       "bad parent for agent '" + names_[i] + "'");
    }
    children_[p].push_back(i);
  }
  if (!root) throw ModelError(ErrorKind::kInvalidTree, "tree has no root");
  root_ = *root;
  if (bfs_order().size() != n) {
    throw ModelError(ErrorKind::kInvalidTree,
                     "tree has a cycle or agents unreachable from the root");
  }
}

OrderedTree OrderedTree::from_edges(
    std::vector<std::string> names, const std::string& root,
    std::span<const std::pair<std::string, std::string>> edges) {
  const auto ids = name_index(names, ErrorKind::kInvalidTree);
  std::vector<std::optional<std::size_t>> parents(names.size());
  index_of(ids, root, ErrorKind::kInvalidTree);
  for (const auto& [from, to] : edges) {
    const std::size_t p = index_of(ids, from, ErrorKind::kInvalidTree);
    const std::size_t c = index_of(ids, to, ErrorKind::kInvalidTree);
    if (parents[c]) {
      throw ModelError(ErrorKind::kInvalidTree,
                       "agent '" + to + "' has two parents");
    }
    if (to == root) {
      throw ModelError(ErrorKind::kInvalidTree, "root '" + root + "' has a parent");
    }
    parents[c] = p;
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!parents[i] && names[i] != root) {
      throw ModelError(ErrorKind::kInvalidTree,
                       "agent '" + names[i] + "' has no parent");
    }
  }
  return OrderedTree(std::move(names), std::move(parents));
}

std::optional<std::size_t> OrderedTree::find(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::vector<std::size_t> OrderedTree::bfs_order() const {
  std::vector<std::size_t> order{root_};
  std::vector<bool> seen(size(), false);
  seen[root_] = true;
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t c : children_[order[k]]) {
      if (seen[c]) return order;  // cycle; caller compares sizes
      seen[c] = true;
      order.push_back(c);
    }
  }
  return order;
}

std::vector<Chatroom> chatrooms_of(const OrderedTree& tree) {
  std::vector<Chatroom> rooms;
  for (std::size_t i : tree.bfs_order()) {
    if (tree.terminal(i)) continue;
    const auto kids = tree.children(i);
    rooms.push_back({i, {kids.begin(), kids.end()}});
  }
  return rooms;
}

// Beliefs and chatroom games --------------------------------------------------

namespace {

double truth(std::span<const AgentParams> params, std::size_t agent,
             const OrderedTree& tree) {
  const TypeSet& t = params[agent].types;
  if (!t.is_singleton()) {
    throw ModelError(ErrorKind::kInvalidGame,
                     "dirac-truth beliefs need a singleton type for agent '" +
                         tree.name(agent) + "'");
  }
  return t.values().front();
}

}  // namespace

std::vector<AgentBeliefs> dirac_truth_beliefs(
    const OrderedTree& tree, std::span<const AgentParams> params) {
  if (params.size() != tree.size()) {
    throw ModelError(ErrorKind::kInvalidGame,
                     "need one parameter set per agent");
  }
  std::vector<AgentBeliefs> out(tree.size());
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (const auto p = tree.parent(i)) {
      std::vector<double> profile{truth(params, *p, tree)};
      for (std::size_t sib : tree.children(*p)) {
        if (sib != i) profile.push_back(truth(params, sib, tree));
      }
      out[i].receiving = SecondOrderBelief::dirac(std::move(profile));
    }
    if (!tree.terminal(i)) {
      std::vector<double> profile;
      for (std::size_t c : tree.children(i)) {
        profile.push_back(truth(params, c, tree));
      }
      out[i].sending = SecondOrderBelief::dirac(std::move(profile));
    }
  }
  return out;
}

ChatroomGame chatroom_game(const OrderedTree& tree, std::size_t sender,
                           std::span<const AgentParams> params,
                           std::span<const AgentBeliefs> beliefs) {
  ChatroomGame game{sender, params[sender].types, {}};
  for (std::size_t j : tree.children(sender)) {
    if (!beliefs[j].receiving) {
      throw ModelError(ErrorKind::kInvalidGame,
                       "agent '" + tree.name(j) + "' has no receiving belief");
    }
    game.receivers.push_back(
        {j, params[j].types, params[j].lambda, *beliefs[j].receiving});
  }
  return game;
}

// Global cascade -------------------------------------------------------------

std::size_t CascadeResult::reach_count() const {
  return static_cast<std::size_t>(std::count(reached.begin(), reached.end(), true));
}

CascadeResult solve_global(const OrderedTree& tree, const EvidenceRelation& mu,
                           std::span<const AgentParams> params,
                           std::span<const AgentBeliefs> beliefs,
                           double tolerance) {
  const std::size_t n = tree.size();
  if (params.size() != n || beliefs.size() != n) {
    throw ModelError(ErrorKind::kInvalidGame,
                     "need parameters and beliefs for every agent");
  }
  CascadeResult out;
  out.receiver_action.assign(n, std::nullopt);
  out.sender_action.assign(n, std::nullopt);
  out.reached.assign(n, false);
  out.reached[tree.root()] = true;

  auto decide = [&](std::size_t agent, SendGate gate) {
    if (!beliefs[agent].sending) {
      throw ModelError(ErrorKind::kInvalidGame,
                       "agent '" + tree.name(agent) + "' has no sending belief");
    }
    return decide_send(params[agent].types, *beliefs[agent].sending, mu, gate,
                       tolerance);
  };

  std::deque<std::size_t> senders;
  if (!tree.terminal(tree.root())) {
    const SenderAction a = decide(tree.root(), SendGate::root());
    out.sender_action[tree.root()] = a;
    if (a == SenderAction::kSend) senders.push_back(tree.root());
  }

  while (!senders.empty()) {
    const std::size_t s = senders.front();
    senders.pop_front();
    const ChatroomGame game = chatroom_game(tree, s, params, beliefs);
    const ChatroomEquilibrium eq = solve_chatroom(game, tolerance);
    if (!eq.exists()) {
      out.status = Multiplicity::kNone;
      out.failing_chatroom = s;
      return out;
    }
    if (eq.status == Multiplicity::kMultiple) {
      out.status = Multiplicity::kMultiple;
      out.multiple_chatrooms.push_back(s);
    }
    int zeros = 0;
    for (std::size_t k = 0; k < game.receivers.size(); ++k) {
      const std::size_t j = game.receivers[k].agent;
      out.reached[j] = true;
      out.receiver_action[j] = eq.actions[k];
      if (eq.actions[k] == ReceiverAction::kDisapprove) ++zeros;
    }
    for (std::size_t j : tree.children(s)) {
      if (tree.terminal(j)) continue;
      const SenderAction a = decide(j, SendGate{params[j].ell, zeros, false});
      out.sender_action[j] = a;
      if (a == SenderAction::kSend) senders.push_back(j);
    }
  }
  return out;
}

// Social graphs --------------------------------------------------------------

SocialGraph::SocialGraph(std::vector<std::string> names)
    : names_(std::move(names)), adjacency_(names_.size()) {
  name_index(names_, ErrorKind::kInvalidGraph);
}

SocialGraph SocialGraph::from_edges(
    std::vector<std::string> names,
    std::span<const std::pair<std::string, std::string>> edges) {
  SocialGraph g(std::move(names));
  const auto ids = name_index(g.names_, ErrorKind::kInvalidGraph);
  for (const auto& [a, b] : edges) {
    g.add_edge(index_of(ids, a, ErrorKind::kInvalidGraph),
               index_of(ids, b, ErrorKind::kInvalidGraph));
  }
  return g;
}

void SocialGraph::add_edge(std::size_t a, std::size_t b) {
  auto insert = [](std::vector<std::size_t>& v, std::size_t x) {
    const auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
  };
  insert(adjacency_.at(a), b);
  insert(adjacency_.at(b), a);
}

bool SocialGraph::has_edge(std::size_t a, std::size_t b) const {
  const auto& v = adjacency_.at(a);
  return std::binary_search(v.begin(), v.end(), b);
}

std::optional<std::size_t> SocialGraph::find(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::vector<std::pair<std::size_t, std::size_t>> SocialGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j : adjacency_[i]) {
      if (i <= j) out.emplace_back(i, j);
    }
  }
  return out;
}

std::string_view to_string(GraphViolation v) {
  switch (v) {
    case GraphViolation::kNone: return "none";
    case GraphViolation::kDisconnected: return "disconnected";
    case GraphViolation::kSelfLoop: return "self-loop";
    case GraphViolation::kT2: return "T2";
    case GraphViolation::kT1: return "T1";
  }
  return "?";
}

std::string GraphCheck::describe(const SocialGraph& graph) const {
  std::ostringstream os;
  auto nm = [&](std::size_t k) { return graph.name(witness.at(k)); };
  switch (violation) {
    case GraphViolation::kNone:
      os << "valid";
      break;
    case GraphViolation::kDisconnected:
      os << "disconnected: no path from " << nm(0) << " to " << nm(1);
      break;
    case GraphViolation::kSelfLoop:
      os << "self-loop at " << nm(0);
      break;
    case GraphViolation::kT2:
      os << "T2 violated: " << nm(3) << " is not adjacent to " << nm(0)
         << " but is adjacent to both of its neighbours " << nm(1) << " and "
         << nm(2);
      break;
    case GraphViolation::kT1:
      os << "T1 violated: neighbours " << nm(1) << " and " << nm(2) << " of "
         << nm(0) << " are connected without " << nm(0)
         << " but not adjacent";
      break;
  }
  return os.str();
}

namespace {

// Component label of every agent in the graph with `removed` deleted
// (removed itself gets label -1).
std::vector<int> components_without(const SocialGraph& g,
                                    std::optional<std::size_t> removed) {
  std::vector<int> label(g.size(), -1);
  int next = 0;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (label[s] >= 0 || s == removed) continue;
    std::vector<std::size_t> stack{s};
    label[s] = next;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v : g.neighbors(u)) {
        if (label[v] < 0 && v != removed) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

}  // namespace

GraphCheck validate_graph(const SocialGraph& graph) {
  const std::size_t n = graph.size();
  if (n == 0) return {GraphViolation::kDisconnected, {}};
  for (std::size_t i = 0; i < n; ++i) {
    if (graph.has_edge(i, i)) return {GraphViolation::kSelfLoop, {i}};
  }
  const auto whole = components_without(graph, std::nullopt);
  for (std::size_t i = 1; i < n; ++i) {
    if (whole[i] != whole[0]) return {GraphViolation::kDisconnected, {0, i}};
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = graph.neighbors(i);
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        for (std::size_t k : graph.neighbors(nb[a])) {
          if (k == i || graph.has_edge(i, k)) continue;
          if (graph.has_edge(k, nb[b])) {
            return {GraphViolation::kT2, {i, nb[a], nb[b], k}};
          }
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto label = components_without(graph, i);
    const auto nb = graph.neighbors(i);
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        if (label[nb[a]] == label[nb[b]] && !graph.has_edge(nb[a], nb[b])) {
          return {GraphViolation::kT1, {i, nb[a], nb[b]}};
        }
      }
    }
  }
  return {};
}

OrderedTree root_tree(const SocialGraph& graph, std::size_t root) {
  if (root >= graph.size()) {
    throw ModelError(ErrorKind::kInvalidGraph, "root is not in the graph");
  }
  const GraphCheck check = validate_graph(graph);
  if (!check.valid()) {
    throw ModelError(ErrorKind::kInvalidGraph, check.describe(graph));
  }
  const std::size_t n = graph.size();
  std::vector<std::optional<std::size_t>> parents(n);
  std::vector<bool> placed(n, false);
  placed[root] = true;
  std::deque<std::size_t> frontier{root};
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop_front();
    for (std::size_t v : graph.neighbors(u)) {
      if (const auto p = parents[u]; p && (v == *p || graph.has_edge(*p, v))) {
        continue;
      }
      if (placed[v]) {
        throw ModelError(ErrorKind::kInvalidGraph,
                         "agent '" + graph.name(v) + "' is reached twice");
      }
      placed[v] = true;
      parents[v] = u;
      frontier.push_back(v);
    }
  }
  if (std::find(placed.begin(), placed.end(), false) != placed.end()) {
    throw ModelError(ErrorKind::kInvalidGraph, "rooted tree does not span the graph");
  }
  return OrderedTree({graph.names().begin(), graph.names().end()},
                     std::move(parents));
}

SocialGraph undirected_closure(const OrderedTree& tree) {
  SocialGraph g({tree.names().begin(), tree.names().end()});
  for (const Chatroom& room : chatrooms_of(tree)) {
    std::vector<std::size_t> members{room.sender};
    members.insert(members.end(), room.receivers.begin(), room.receivers.end());
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        g.add_edge(members[a], members[b]);
      }
    }
  }
  return g;
}

BeliefBuilder dirac_truth_builder(std::vector<AgentParams> params) {
  return [params = std::move(params)](const OrderedTree& tree) {
    return dirac_truth_beliefs(tree, params);
  };
}

std::vector<RootReach> reach_by_root(const SocialGraph& graph,
                                     const EvidenceRelation& mu,
                                     std::span<const AgentParams> params,
                                     const BeliefBuilder& builder,
                                     unsigned threads, double tolerance) {
  const GraphCheck check = validate_graph(graph);
  if (!check.valid()) {
    throw ModelError(ErrorKind::kInvalidGraph, check.describe(graph));
  }
  std::vector<RootReach> out(graph.size());
  auto solve_one = [&](std::size_t r) {
    out[r].root = r;
    try {
      const OrderedTree tree = root_tree(graph, r);
      const auto beliefs = builder(tree);
      out[r].result = solve_global(tree, mu, params, beliefs, tolerance);
    } catch (const std::exception& e) {
      out[r].error = e.what();
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, graph.size()));
  if (threads == 1) {
    for (std::size_t r = 0; r < graph.size(); ++r) solve_one(r);
    return out;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < graph.size(); r = next++) solve_one(r);
      });
    }
  }
  return out;
}

}  // namespace chatnet
