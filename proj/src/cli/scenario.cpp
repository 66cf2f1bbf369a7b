#include "chatnet/cli/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace chatnet::cli {

using nlohmann::json;
using Kind = ScenarioError::Kind;

namespace {

[[noreturn]] void schema(const std::string& origin, const std::string& path,
                         const std::string& msg) {
  throw ScenarioError(Kind::kSchema, origin + ": field " + (path.empty() ? "/" : path) +
                                         ": " + msg);
}

// A JSON value plus its pointer, for error messages.
struct Node {
  const json& j;
  std::string path;
  const std::string& origin;

  Node at(const std::string& key) const {
    if (!has(key)) fail("missing key '" + key + "'");
    return {j.at(key), path + "/" + key, origin};
  }
  Node at(std::size_t i) const { return {j.at(i), path + "/" + std::to_string(i), origin}; }
  bool has(const std::string& key) const { return j.is_object() && j.contains(key); }

  [[noreturn]] void fail(const std::string& msg) const { schema(origin, path, msg); }

  void expect_object(std::initializer_list<const char*> allowed) const {
    if (!j.is_object()) fail("expected an object");
    for (const auto& [key, _] : j.items()) {
      if (std::none_of(allowed.begin(), allowed.end(),
                       [&](const char* a) { return key == a; })) {
        fail("unknown key '" + key + "'");
      }
    }
  }
  const json& array() const {
    if (!j.is_array()) fail("expected an array");
    return j;
  }
  double number() const {
    if (!j.is_number()) fail("expected a number");
    return j.get<double>();
  }
  int integer() const {
    if (!j.is_number_integer()) fail("expected an integer");
    return j.get<int>();
  }
  std::string string() const {
    if (!j.is_string()) fail("expected a string");
    return j.get<std::string>();
  }
  std::vector<double> numbers() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < array().size(); ++i) out.push_back(at(i).number());
    return out;
  }
  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < array().size(); ++i) out.push_back(at(i).string());
    return out;
  }
};

template <class F>
auto model(const std::string& origin, const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ModelError& e) {
    throw ScenarioError(Kind::kModel, origin + ": field " + path + ": " + e.what());
  }
}

std::vector<NamedAtom> parse_atoms(const Node& n) {
  std::vector<NamedAtom> out;
  const auto& arr = n.array();
  if (arr.empty()) n.fail("a belief needs at least one atom");
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const Node a = n.at(k);
    a.expect_object({"weight", "peers"});
    NamedAtom atom;
    if (a.has("weight")) {
      atom.weight = a.at("weight").number();
    } else if (arr.size() > 1) {
      a.fail("weight is required when a belief has several atoms");
    }
    const Node peers = a.at("peers");
    if (!peers.j.is_object()) peers.fail("expected an object mapping agent ids to credences");
    for (const auto& [id, _] : peers.j.items()) atom.peers[id] = peers.at(id).number();
    out.push_back(std::move(atom));
  }
  return out;
}

}  // namespace

// Scenario -------------------------------------------------------------------

std::vector<std::string> Scenario::names() const {
  std::vector<std::string> out;
  for (const auto& a : agents) out.push_back(a.id);
  return out;
}

std::vector<AgentParams> Scenario::params() const {
  std::vector<AgentParams> out;
  for (const auto& a : agents) {
    const std::string path = "/agents/" + a.id;
    out.push_back(model(origin, path, [&] {
      switch (a.form) {
        case TypeForm::kCredence:
          return AgentParams{TypeSet::singleton(a.values.at(0), mu), a.lambda, a.ell};
        case TypeForm::kPrior:
          return AgentParams{TypeSet::singleton(credence_from_prior(a.values.at(0), mu), mu),
                             a.lambda, a.ell};
        case TypeForm::kFinite:
          return AgentParams{TypeSet::finite(a.values, mu), a.lambda, a.ell};
        case TypeForm::kInterval:
          return AgentParams{TypeSet::interval(a.values.at(0), a.values.at(1), mu), a.lambda,
                             a.ell};
      }
      throw ModelError(ErrorKind::kInvalidGame, "unknown type form");
    }));
  }
  return out;
}

std::size_t Scenario::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agents[i].id == id) return i;
  }
  throw ScenarioError(Kind::kSchema, origin + ": unknown agent '" + id + "'");
}

SocialGraph Scenario::graph() const {
  if (is_tree) return undirected_closure(tree());
  return model(origin, "/graph", [&] {
    SocialGraph g = SocialGraph::from_edges(names(), edges);
    for (const auto& clique : cliques) {
      for (std::size_t a = 0; a < clique.size(); ++a) {
        for (std::size_t b = a + 1; b < clique.size(); ++b) {
          g.add_edge(index_of(clique[a]), index_of(clique[b]));
        }
      }
    }
    return g;
  });
}

OrderedTree Scenario::tree() const {
  if (!root) {
    throw ScenarioError(Kind::kSchema,
                        origin + ": field /graph/root: a root is needed to solve a graph");
  }
  if (is_tree) {
    return model(origin, "/tree", [&] { return OrderedTree::from_edges(names(), *root, edges); });
  }
  return tree_at(*root);
}

OrderedTree Scenario::tree_at(const std::string& r) const {
  if (is_tree && root && r == *root) return tree();
  const SocialGraph g = graph();
  const std::size_t idx = index_of(r);
  return model(origin, is_tree ? "/tree" : "/graph", [&] { return root_tree(g, idx); });
}

std::vector<AgentBeliefs> Scenario::beliefs_for(const OrderedTree& t) const {
  const auto p = params();
  std::vector<AgentBeliefs> out(t.size());
  auto layout = [&](std::size_t agent, const char* role, std::span<const std::size_t> peers,
                    const std::vector<NamedAtom>* atoms) {
    const std::string path = "/beliefs/" + t.name(agent) + "/" + role;
    if (!atoms) {
      std::vector<double> profile;
      for (std::size_t j : peers) {
        if (!p[j].types.is_singleton()) {
          schema(origin, path,
                 "agent '" + t.name(agent) + "' needs an explicit belief because '" +
                     t.name(j) + "' has several possible types");
        }
        profile.push_back(p[j].types.values().front());
      }
      return SecondOrderBelief::dirac(std::move(profile));
    }
    std::vector<BeliefAtom> laid;
    for (std::size_t k = 0; k < atoms->size(); ++k) {
      BeliefAtom atom{{}, (*atoms)[k].weight};
      for (std::size_t j : peers) {
        const auto it = (*atoms)[k].peers.find(t.name(j));
        if (it == (*atoms)[k].peers.end()) {
          schema(origin, path + "/" + std::to_string(k),
                 "atom has no credence for peer '" + t.name(j) + "'");
        }
        atom.profile.push_back(it->second);
      }
      laid.push_back(std::move(atom));
    }
    return model(origin, path, [&] { return SecondOrderBelief(std::move(laid)); });
  };
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto it = beliefs.find(t.name(i));
    const ExplicitBelief* given = it == beliefs.end() ? nullptr : &it->second;
    if (const auto parent = t.parent(i)) {
      std::vector<std::size_t> peers{*parent};
      for (std::size_t s : t.children(*parent)) {
        if (s != i) peers.push_back(s);
      }
      out[i].receiving = layout(i, "receiving", peers,
                                given && !given->receiving.empty() ? &given->receiving : nullptr);
    }
    if (!t.terminal(i)) {
      out[i].sending = layout(i, "sending", t.children(i),
                              given && !given->sending.empty() ? &given->sending : nullptr);
    }
  }
  return out;
}

BeliefBuilder Scenario::builder() const {
  return [copy = *this](const OrderedTree& t) { return copy.beliefs_for(t); };
}

// Parsing --------------------------------------------------------------------

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < stop; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) {
      what = what.substr(pos);
    }
    throw ScenarioError(Kind::kParse, origin + ":" + std::to_string(line) + ":" +
                                          std::to_string(col) + ": " + what);
  }

  Scenario s;
  s.origin = origin;
  const Node top{doc, "", origin};
  top.expect_object({"name", "evidence", "defaults", "agents", "tree", "graph", "beliefs"});

  if (top.has("name")) s.name = top.at("name").string();
  const Node ev = top.at("evidence");
  ev.expect_object({"given_c", "given_not_c"});
  const double mc = ev.at("given_c").number();
  const double mnc = ev.at("given_not_c").number();
  s.mu = model(origin, "/evidence", [&] { return EvidenceRelation(mc, mnc); });

  double default_lambda = 0.0;
  int default_ell = 1;
  if (top.has("defaults")) {
    const Node d = top.at("defaults");
    d.expect_object({"lambda", "ell"});
    if (d.has("lambda")) default_lambda = d.at("lambda").number();
    if (d.has("ell")) default_ell = d.at("ell").integer();
  }

  const Node agents = top.at("agents");
  if (agents.array().empty()) agents.fail("at least one agent is required");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < agents.j.size(); ++i) {
    const Node a = agents.at(i);
    a.expect_object({"id", "credence", "prior", "types", "interval", "lambda", "ell"});
    AgentSpec spec;
    spec.id = a.at("id").string();
    if (!seen.insert(spec.id).second) a.at("id").fail("duplicate agent id '" + spec.id + "'");
    int forms = 0;
    if (a.has("credence")) {
      spec.form = TypeForm::kCredence;
      spec.values = {a.at("credence").number()};
      ++forms;
    }
    if (a.has("prior")) {
      spec.form = TypeForm::kPrior;
      spec.values = {a.at("prior").number()};
      ++forms;
    }
    if (a.has("types")) {
      spec.form = TypeForm::kFinite;
      spec.values = a.at("types").numbers();
      if (spec.values.empty()) a.at("types").fail("type list is empty");
      ++forms;
    }
    if (a.has("interval")) {
      spec.form = TypeForm::kInterval;
      spec.values = a.at("interval").numbers();
      if (spec.values.size() != 2) a.at("interval").fail("expected [lo, hi]");
      ++forms;
    }
    if (forms != 1) a.fail("give exactly one of credence, prior, types, interval");
    spec.lambda = a.has("lambda") ? a.at("lambda").number() : default_lambda;
    spec.ell = a.has("ell") ? a.at("ell").integer() : default_ell;
    if (spec.lambda < 0) a.fail("lambda must be non-negative");
    s.agents.push_back(std::move(spec));
  }

  auto check_id = [&](const Node& n) {
    const std::string id = n.string();
    if (!seen.contains(id)) n.fail("unknown agent '" + id + "'");
    return id;
  };
  auto parse_edges = [&](const Node& n) {
    for (std::size_t k = 0; k < n.array().size(); ++k) {
      const Node e = n.at(k);
      if (e.array().size() != 2) e.fail("an edge is a pair of agent ids");
      s.edges.emplace_back(check_id(e.at(0)), check_id(e.at(1)));
    }
  };

  if (top.has("tree") == top.has("graph")) {
    top.fail("give exactly one of tree, graph");
  }
  if (top.has("tree")) {
    const Node t = top.at("tree");
    t.expect_object({"root", "edges"});
    s.is_tree = true;
    s.root = check_id(t.at("root"));
    if (t.has("edges")) parse_edges(t.at("edges"));
  } else {
    const Node g = top.at("graph");
    g.expect_object({"root", "edges", "cliques"});
    s.is_tree = false;
    if (g.has("root")) s.root = check_id(g.at("root"));
    if (g.has("edges")) parse_edges(g.at("edges"));
    if (g.has("cliques")) {
      const Node c = g.at("cliques");
      for (std::size_t k = 0; k < c.array().size(); ++k) {
        std::vector<std::string> members;
        const Node m = c.at(k);
        for (std::size_t q = 0; q < m.array().size(); ++q) members.push_back(check_id(m.at(q)));
        s.cliques.push_back(std::move(members));
      }
    }
  }

  if (top.has("beliefs")) {
    const Node b = top.at("beliefs");
    if (b.j.is_string()) {
      if (b.string() != "dirac-truth") b.fail("the only shorthand is \"dirac-truth\"");
    } else {
      if (!b.j.is_object()) b.fail("expected \"dirac-truth\" or an object keyed by agent id");
      for (const auto& [id, _] : b.j.items()) {
        const Node entry = b.at(id);
        if (!seen.contains(id)) entry.fail("unknown agent '" + id + "'");
        entry.expect_object({"receiving", "sending"});
        ExplicitBelief eb;
        if (entry.has("receiving")) eb.receiving = parse_atoms(entry.at("receiving"));
        if (entry.has("sending")) eb.sending = parse_atoms(entry.at("sending"));
        for (const auto* atoms : {&eb.receiving, &eb.sending}) {
          for (const auto& atom : *atoms) {
            for (const auto& [peer, _] : atom.peers) {
              if (!seen.contains(peer)) entry.fail("atom names unknown agent '" + peer + "'");
            }
          }
        }
        s.beliefs.emplace(id, std::move(eb));
      }
    }
  }

  // Building the parameters surfaces type-set errors now rather than later.
  s.params();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(Kind::kParse, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

// Canonical output -----------------------------------------------------------

nlohmann::ordered_json to_json(const Scenario& s) {
  using oj = nlohmann::ordered_json;
  oj out;
  if (!s.name.empty()) out["name"] = s.name;
  out["evidence"] = {{"given_c", s.mu.given_c()}, {"given_not_c", s.mu.given_not_c()}};
  oj agents = oj::array();
  for (const auto& a : s.agents) {
    oj entry;
    entry["id"] = a.id;
    switch (a.form) {
      case TypeForm::kCredence: entry["credence"] = a.values.at(0); break;
      case TypeForm::kPrior: entry["prior"] = a.values.at(0); break;
      case TypeForm::kFinite: entry["types"] = a.values; break;
      case TypeForm::kInterval: entry["interval"] = a.values; break;
    }
    entry["lambda"] = a.lambda;
    entry["ell"] = a.ell;
    agents.push_back(std::move(entry));
  }
  out["agents"] = std::move(agents);

  oj topo;
  if (s.root) topo["root"] = *s.root;
  oj edges = oj::array();
  for (const auto& [a, b] : s.edges) edges.push_back({a, b});
  topo["edges"] = std::move(edges);
  if (!s.is_tree && !s.cliques.empty()) topo["cliques"] = s.cliques;
  out[s.is_tree ? "tree" : "graph"] = std::move(topo);

  if (s.beliefs.empty()) {
    out["beliefs"] = "dirac-truth";
  } else {
    oj beliefs = oj::object();
    for (const auto& [id, eb] : s.beliefs) {
      oj entry = oj::object();
      auto atoms = [](const std::vector<NamedAtom>& v) {
        oj arr = oj::array();
        for (const auto& atom : v) {
          oj peers = oj::object();
          for (const auto& [peer, x] : atom.peers) peers[peer] = x;
          arr.push_back({{"weight", atom.weight}, {"peers", std::move(peers)}});
        }
        return arr;
      };
      if (!eb.receiving.empty()) entry["receiving"] = atoms(eb.receiving);
      if (!eb.sending.empty()) entry["sending"] = atoms(eb.sending);
      beliefs[id] = std::move(entry);
    }
    out["beliefs"] = std::move(beliefs);
  }
  return out;
}

}  // namespace chatnet::cli
