#pragma once

// Scenario files: a JSON document describing the evidence relation, the
// agents, a tree or graph topology, and beliefs. See docs/scenario-format.md.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "chatnet/network.hpp"

namespace chatnet::cli {

class ScenarioError : public std::runtime_error {
 public:
  enum class Kind { kParse, kSchema, kModel };
  ScenarioError(Kind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// How an agent's type set was written, kept so normalize can echo it.
enum class TypeForm { kCredence, kPrior, kFinite, kInterval };

struct AgentSpec {
  std::string id;
  TypeForm form = TypeForm::kCredence;
  std::vector<double> values;  // one credence, one prior, the list, or [lo, hi]
  double lambda = 0.0;
  int ell = 1;
};

// A belief atom whose peers are named, so it can be laid out for any
// chatroom that contains those peers.
struct NamedAtom {
  double weight = 1.0;
  std::map<std::string, double> peers;
};

struct ExplicitBelief {
  std::vector<NamedAtom> receiving;
  std::vector<NamedAtom> sending;
};

struct Scenario {
  std::string origin;  // file name for messages
  std::string name;
  EvidenceRelation mu{0.9, 0.1};
  std::vector<AgentSpec> agents;

  // Exactly one of tree_edges / graph_edges describes the topology.
  bool is_tree = true;
  std::optional<std::string> root;
  std::vector<std::pair<std::string, std::string>> edges;  // parent->child for trees
  std::vector<std::vector<std::string>> cliques;           // graphs only

  std::map<std::string, ExplicitBelief> beliefs;

  std::vector<std::string> names() const;
  std::vector<AgentParams> params() const;
  OrderedTree tree() const;             // requires a root for graphs
  OrderedTree tree_at(const std::string& root) const;
  SocialGraph graph() const;            // closure for trees
  std::size_t index_of(const std::string& id) const;

  // Beliefs laid out for `tree`. Explicit beliefs win; agents without one
  // get point masses on their peers' singleton credences.
  std::vector<AgentBeliefs> beliefs_for(const OrderedTree& tree) const;
  BeliefBuilder builder() const;
};

Scenario parse_scenario(const std::string& text, const std::string& origin = "<input>");
Scenario load_scenario(const std::string& path);

// Canonical form: defaults expanded, fixed key order, edges as written.
nlohmann::ordered_json to_json(const Scenario& s);

}  // namespace chatnet::cli
