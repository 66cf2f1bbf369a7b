#include "chatnet/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "chatnet/oracle.hpp"

namespace chatnet::cli {

using oj = nlohmann::ordered_json;

namespace {

oj action_cell(const std::optional<ReceiverAction>& a) {
  return a ? oj(std::string(to_string(*a))) : oj();
}

oj sender_cell(const std::optional<SenderAction>& a) {
  return a ? oj(std::string(to_string(*a))) : oj();
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : " ") + p;
  return out;
}

std::string room_profile(const OrderedTree& tree, const CascadeResult& r, std::size_t sender) {
  std::vector<std::string> acts;
  for (std::size_t j : tree.children(sender)) {
    if (!r.receiver_action[j]) return "-";
    acts.emplace_back(to_string(*r.receiver_action[j]));
  }
  return join(acts);
}

// Reached non-terminal agents that did not pass the message on.
std::vector<std::string> stopped_at(const OrderedTree& tree, const CascadeResult& r) {
  std::vector<std::string> out;
  for (std::size_t i : tree.bfs_order()) {
    if (r.reached[i] && r.sender_action[i] == SenderAction::kNoSend) out.push_back(tree.name(i));
  }
  return out;
}

oj status_cell(const CascadeResult& r, const OrderedTree& tree) {
  if (r.status == Multiplicity::kNone) {
    return "none at " + tree.name(*r.failing_chatroom);
  }
  return std::string(to_string(r.status));
}

}  // namespace

// solve ----------------------------------------------------------------------

CommandResult cmd_solve(const Scenario& s, const SolveOptions& opt) {
  const OrderedTree tree = opt.root ? s.tree_at(*opt.root) : s.tree();
  const auto params = s.params();
  const auto beliefs = s.beliefs_for(tree);
  const auto r = solve_global(tree, s.mu, params, beliefs, opt.tolerance);

  CommandResult out;
  out.table.columns = {"agent", "parent", "reached", "action", "gate", "send"};
  for (std::size_t i : tree.bfs_order()) {
    const auto p = tree.parent(i);
    // Remaining tolerance for disapproval in the agent's receiving room.
    oj gate;
    if (!tree.terminal(i) && r.reached[i]) {
      if (!p) {
        gate = "open";
      } else if (r.receiver_action[i]) {
        int zeros = 0;
        for (std::size_t j : tree.children(*p)) {
          if (r.receiver_action[j] == ReceiverAction::kDisapprove) ++zeros;
        }
        gate = SendGate{params[i].ell, zeros, false}.slack();
      }
    }
    out.table.add({tree.name(i), p ? oj(tree.name(*p)) : oj(), static_cast<bool>(r.reached[i]),
                   action_cell(r.receiver_action[i]), gate, sender_cell(r.sender_action[i])});
  }
  auto& sum = out.table.summary;
  sum["root"] = tree.name(tree.root());
  sum["reach"] = r.reach_count();
  sum["agents"] = tree.size();
  sum["equilibrium"] = std::string(to_string(r.status));
  if (r.failing_chatroom) sum["failing_chatroom"] = tree.name(*r.failing_chatroom);
  if (!r.multiple_chatrooms.empty()) {
    std::vector<std::string> names;
    for (std::size_t c : r.multiple_chatrooms) names.push_back(tree.name(c));
    sum["multiple_chatrooms"] = join(names);
  }
  out.exit_code = r.has_equilibrium() ? kExitOk : kExitNoEquilibrium;
  return out;
}

// sweep-lambda ---------------------------------------------------------------

CommandResult cmd_sweep_lambda(const Scenario& s, const SweepLambdaOptions& opt) {
  if (!(opt.step > 0.0) || !(opt.to >= opt.from) || opt.from < 0.0) {
    throw ScenarioError(ScenarioError::Kind::kSchema,
                        "sweep range needs 0 <= from <= to and step > 0");
  }
  const double span = (opt.to - opt.from) / opt.step;
  if (span > 1e6) {
    throw ScenarioError(ScenarioError::Kind::kSchema, "sweep has more than a million rows");
  }
  const std::size_t count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;

  const OrderedTree tree = s.tree();
  const auto base = s.params();
  const auto beliefs = s.beliefs_for(tree);
  std::vector<std::size_t> selected;
  for (const auto& id : opt.agents) selected.push_back(s.index_of(id));
  if (selected.empty()) {
    for (std::size_t i = 0; i < base.size(); ++i) selected.push_back(i);
  }
  const auto rooms = chatrooms_of(tree);

  std::vector<double> lambdas(count);
  for (std::size_t k = 0; k < count; ++k) lambdas[k] = opt.from + static_cast<double>(k) * opt.step;
  std::vector<CascadeResult> results(count);
  auto solve_row = [&](std::size_t k) {
    auto params = base;
    for (std::size_t i : selected) params[i].lambda = lambdas[k];
    results[k] = solve_global(tree, s.mu, params, beliefs, opt.tolerance);
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, count));
  if (threads == 1) {
    for (std::size_t k = 0; k < count; ++k) solve_row(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          try {
            for (std::size_t k = next++; k < count; k = next++) solve_row(k);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  CommandResult out;
  out.table.columns = {"lambda", "reach", "equilibrium", "senders"};
  for (const auto& room : rooms) out.table.columns.push_back("room " + tree.name(room.sender));
  bool any_none = false;
  for (std::size_t k = 0; k < count; ++k) {
    const auto& r = results[k];
    std::vector<std::string> senders;
    for (std::size_t i : tree.bfs_order()) {
      if (r.sender_action[i] == SenderAction::kSend) senders.push_back(tree.name(i));
    }
    std::vector<oj> row{lambdas[k], r.reach_count(), status_cell(r, tree),
                        senders.empty() ? oj() : oj(join(senders))};
    for (const auto& room : rooms) row.emplace_back(room_profile(tree, r, room.sender));
    out.table.add(std::move(row));
    any_none = any_none || !r.has_equilibrium();
  }
  std::vector<std::string> names;
  for (std::size_t i : selected) names.push_back(tree.name(i));
  out.table.summary["swept"] = join(names);
  out.table.summary["rows"] = count;
  out.exit_code = any_none ? kExitNoEquilibrium : kExitOk;
  return out;
}

// sweep-root -----------------------------------------------------------------

CommandResult cmd_sweep_root(const Scenario& s, unsigned threads, double tolerance) {
  const SocialGraph graph = s.graph();
  if (const auto check = validate_graph(graph); !check.valid()) {
    throw ScenarioError(ScenarioError::Kind::kModel,
                        s.origin + ": " + std::string(to_string(ErrorKind::kInvalidGraph)) +
                            ": " + check.describe(graph));
  }
  const auto params = s.params();
  const auto reach = reach_by_root(graph, s.mu, params, s.builder(), threads, tolerance);

  std::size_t best = 0, worst = graph.size();
  for (const auto& r : reach) {
    if (!r.result) continue;
    best = std::max(best, r.reach());
    worst = std::min(worst, r.reach());
  }
  CommandResult out;
  out.table.columns = {"root", "reach", "root_sends", "stopped_at", "equilibrium", "best", "error"};
  std::vector<std::string> best_roots;
  for (const auto& r : reach) {
    const std::string name = graph.name(r.root);
    if (!r.result) {
      out.table.add({name, oj(), oj(), oj(), oj(), false, r.error});
      continue;
    }
    const OrderedTree tree = root_tree(graph, r.root);
    const auto& c = *r.result;
    const auto stops = stopped_at(tree, c);
    const bool is_best = r.reach() == best;
    if (is_best) best_roots.push_back(name);
    out.table.add({name, r.reach(), sender_cell(c.sender_action[r.root]),
                   stops.empty() ? oj() : oj(join(stops)), status_cell(c, tree), is_best, oj()});
  }
  out.table.summary["max_reach"] = best;
  out.table.summary["min_reach"] = best_roots.empty() ? 0 : worst;
  out.table.summary["best_roots"] = join(best_roots);
  return out;
}

// validate -------------------------------------------------------------------

CommandResult cmd_validate(const std::string& path, double tolerance) {
  CommandResult out;
  out.table.columns = {"severity", "check", "where", "message"};
  auto error = [&](const std::string& check, const std::string& where, const std::string& msg) {
    out.table.add({"error", check, where, msg});
  };
  std::optional<Scenario> s;
  try {
    s = load_scenario(path);
  } catch (const ScenarioError& e) {
    const char* check = e.kind() == ScenarioError::Kind::kParse    ? "parse"
                        : e.kind() == ScenarioError::Kind::kSchema ? "schema"
                                                                   : "model";
    error(check, path, e.what());
  }

  if (s) {
    std::vector<std::string> roots;
    if (s->is_tree) {
      if (s->root) roots.push_back(*s->root);
    } else {
      const SocialGraph g = s->graph();
      const auto check = validate_graph(g);
      if (!check.valid()) {
        error(std::string(to_string(check.violation)), "/graph", check.describe(g));
      } else if (s->root) {
        roots.push_back(*s->root);
      } else {
        for (const auto& id : s->names()) roots.push_back(id);
      }
    }
    const auto params = s->params();
    for (const auto& r : roots) {
      try {
        const OrderedTree tree = s->tree_at(r);
        const auto beliefs = s->beliefs_for(tree);
        for (const auto& room : chatrooms_of(tree)) {
          try {
            validate(chatroom_game(tree, room.sender, params, beliefs), tolerance);
          } catch (const ModelError& e) {
            error("chatroom", "root " + r + ", room " + tree.name(room.sender), e.what());
          }
        }
      } catch (const std::exception& e) {
        error("beliefs", "root " + r, e.what());
      }
    }
  }
  out.table.summary["errors"] = out.table.rows.size();
  out.table.summary["result"] = out.table.rows.empty() ? "clean" : "invalid";
  out.exit_code = out.table.rows.empty() ? kExitOk : kExitInput;
  return out;
}

// normalize ------------------------------------------------------------------

CommandResult cmd_normalize(const Scenario& s, bool compact) {
  // Surface topology errors before echoing the scenario back.
  if (s.root || !s.is_tree) s.graph();
  CommandResult out;
  out.raw = compact ? to_json(s).dump() : to_json(s).dump(2);
  *out.raw += '\n';
  return out;
}

// selfcheck ------------------------------------------------------------------

CommandResult cmd_selfcheck(unsigned long long seed, long draws, double tolerance) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  long global_bad = 0, room_bad = 0, solved = 0;
  for (long n = 0; n < draws; ++n) {
    const EvidenceRelation mu(uniform(0.55, 0.99), uniform(0.01, 0.45));
    const auto credence = [&] {
      return mu.given_not_c() + (mu.given_c() - mu.given_not_c()) * uniform(0.01, 0.99);
    };
    const std::size_t size = static_cast<std::size_t>(pick(1, 6));
    std::vector<std::string> names;
    std::vector<std::optional<std::size_t>> parents(size);
    std::vector<AgentParams> params;
    for (std::size_t i = 0; i < size; ++i) {
      names.push_back(std::to_string(i + 1));
      if (i > 0) parents[i] = static_cast<std::size_t>(pick(0, static_cast<int>(i) - 1));
      params.push_back({TypeSet::singleton(credence(), mu), std::exp(uniform(-3.0, 3.0)), pick(1, 3)});
    }
    const OrderedTree tree(names, parents);
    const auto beliefs = dirac_truth_beliefs(tree, params);
    const auto r = solve_global(tree, mu, params, beliefs, tolerance);
    const auto all = oracle::oracle_global(tree, mu, params, beliefs, 6, tolerance);
    if (r.has_equilibrium()) {
      ++solved;
      const bool found =
          std::find(all.begin(), all.end(), oracle::profile_of(r)) != all.end();
      if (!found || (r.status == Multiplicity::kUnique) != (all.size() == 1)) ++global_bad;
    } else if (!all.empty()) {
      ++global_bad;
    }
    for (const auto& room : chatrooms_of(tree)) {
      const auto game = chatroom_game(tree, room.sender, params, beliefs);
      const auto eq = solve_chatroom(game, tolerance);
      const auto profiles = oracle::oracle_chatroom(game, tolerance);
      const bool agree =
          eq.exists() == !profiles.empty() &&
          (!eq.exists() ||
           std::find(profiles.begin(), profiles.end(), eq.actions) != profiles.end());
      if (!agree) ++room_bad;
    }
  }
  CommandResult out;
  out.table.columns = {"check", "draws", "violations"};
  out.table.add({"cascade vs enumeration", draws, global_bad});
  out.table.add({"chatroom vs enumeration", draws, room_bad});
  out.table.summary["seed"] = seed;
  out.table.summary["with_equilibrium"] = solved;
  out.exit_code = global_bad + room_bad == 0 ? kExitOk : kExitInput;
  return out;
}

// Argument handling ----------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equilibrium solver for chatroom cascades of a message through a network."};
  app.name("chatnet");
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_path;
  std::string format_name = "table";
  double tolerance = kTolerance;
  unsigned long long seed = 1;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--out", out_path, "Write the report here instead of stdout");
  app.add_option("--format", format_name, "Report format")
      ->check(CLI::IsMember({"table", "csv", "json-lines"}));
  app.add_option("--tolerance", tolerance, "Comparison tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed for the selfcheck harness");
  app.add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);

  std::string scenario_path;
  auto* solve = app.add_subcommand("solve", "Solve the cascade from the scenario's root");
  solve->add_option("scenario", scenario_path, "Scenario file")->required();
  std::string root;
  solve->add_option("--root", root, "Solve from this agent instead (graph rooting)");

  auto* sweep_lambda = app.add_subcommand("sweep-lambda", "Re-solve over a range of lambda");
  sweep_lambda->add_option("scenario", scenario_path, "Scenario file")->required();
  SweepLambdaOptions sl;
  sweep_lambda->add_option("--agent", sl.agents, "Agents whose lambda is swept (default all)");
  sweep_lambda->add_option("--from", sl.from, "First lambda")->capture_default_str();
  sweep_lambda->add_option("--to", sl.to, "Last lambda")->capture_default_str();
  sweep_lambda->add_option("--step", sl.step, "Lambda increment")->capture_default_str();

  auto* sweep_root = app.add_subcommand("sweep-root", "Solve once per choice of root");
  sweep_root->add_option("scenario", scenario_path, "Scenario file")->required();

  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario and report problems");
  validate_cmd->add_option("scenario", scenario_path, "Scenario file")->required();

  auto* normalize = app.add_subcommand("normalize", "Print the scenario in canonical form");
  normalize->add_option("scenario", scenario_path, "Scenario file")->required();

  auto* selfcheck = app.add_subcommand("selfcheck", "Compare solvers with brute force on random instances");
  long draws = 1000;
  selfcheck->add_option("--draws", draws, "Random instances")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "chatnet: " << e.what() << '\n';
    return kExitInput;
  }

  const Format format = format_name == "csv"          ? Format::kCsv
                        : format_name == "json-lines" ? Format::kJsonLines
                                                      : Format::kTable;
  CommandResult result;
  try {
    if (*solve) {
      result = cmd_solve(load_scenario(scenario_path),
                         {root.empty() ? std::nullopt : std::optional(root), tolerance});
    } else if (*sweep_lambda) {
      sl.threads = threads;
      sl.tolerance = tolerance;
      result = cmd_sweep_lambda(load_scenario(scenario_path), sl);
    } else if (*sweep_root) {
      result = cmd_sweep_root(load_scenario(scenario_path), threads, tolerance);
    } else if (*validate_cmd) {
      result = cmd_validate(scenario_path, tolerance);
    } else if (*normalize) {
      result = cmd_normalize(load_scenario(scenario_path), format == Format::kJsonLines);
    } else {
      result = cmd_selfcheck(seed, draws, tolerance);
    }
  } catch (const ScenarioError& e) {
    err << "chatnet: " << e.what() << '\n';
    return kExitInput;
  } catch (const ModelError& e) {
    err << "chatnet: " << e.what() << '\n';
    return kExitInput;
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "chatnet: cannot write " << out_path << '\n';
      return kExitInput;
    }
  }
  std::ostream& sink = out_path.empty() ? out : file;
  if (result.raw) {
    sink << *result.raw;
  } else {
    render(result.table, format, sink);
  }
  sink.flush();
  if (!sink) {
    err << "chatnet: write failed\n";
    return kExitInput;
  }
  return result.exit_code;
}

}  // namespace chatnet::cli
