// Runs every acceptance criterion once and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "chatnet/network.hpp"
#include "chatnet/oracle.hpp"
#include "support/canonical.hpp"
#include "support/properties.hpp"

using namespace chatnet;
using enum ReceiverAction;

namespace {

// Collects failures inside one criterion.
struct Check {
  std::vector<std::string> failures;
  int count = 0;

  void expect(bool ok, const std::string& what) {
    ++count;
    if (!ok) failures.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": got " << got << ", want " << want << " +- " << tol;
    expect(std::abs(got - want) <= tol, os.str());
  }
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void low_credence_regimes(Check& c) {
  constexpr double theta = 0.1, eps = 1e-9, margin = 1e-6;
  auto best = [&](double b, double lambda) {
    return best_actions(theta, PeerDistanceProfile::dirac(b), lambda, eps);
  };
  for (int k = 0; k <= 10000; ++k) {
    const double b = k / 10000.0;
    if (b < 0.4 - margin) c.expect(best(b, 1) == ActionSet{kDisapprove}, "lambda 1, b=" + fmt(b));
    if (b > 0.4 + margin && b < 1 - margin) {
      c.expect(best(b, 1) == ActionSet{kSilence}, "lambda 1, b=" + fmt(b));
    }
    if (b > 0.875 + margin) c.expect(best(b, 2) == ActionSet{kApprove}, "lambda 2, b=" + fmt(b));
  }
  c.expect(best(1.0, 1) == (ActionSet{kSilence, kApprove}), "lambda 1, b=1 tie");

  // Switching points in b at very high sensitivity, found by bisection.
  auto threshold = [&](ReceiverAction a, bool above) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      const bool in = best(mid, 1e6).contains(a);
      if (in == above) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
  };
  c.near(threshold(kApprove, true), 0.75, 1e-3, "approval threshold at lambda 1e6");
  c.near(threshold(kDisapprove, false), 0.25, 1e-3, "disapproval threshold at lambda 1e6");
}

void shared_belief_at_08(Check& c) {
  const EvidenceRelation mu(0.9, 0.1);
  auto game = [&](TypeSet t1, TypeSet t2, double lambda) {
    ChatroomGame g{0, TypeSet::singleton(0.8, mu), {}};
    g.receivers.push_back({1, std::move(t1), lambda, SecondOrderBelief::dirac({0.8, 0.8})});
    g.receivers.push_back({2, std::move(t2), lambda, SecondOrderBelief::dirac({0.8, 0.8})});
    return g;
  };
  const std::vector<TypeSet> reaching_high{
      TypeSet::singleton(0.8, mu),           TypeSet::finite({0.3, 0.8}, mu),
      TypeSet::finite({0.5, 0.61, 0.8}, mu), TypeSet::interval(0.5, 0.85, mu),
      TypeSet::interval(0.11, 0.89, mu),     TypeSet::interval(0.6 + 1e-6, 0.8, mu)};
  const std::vector<ReceiverAction> silent{kSilence, kSilence};
  for (const auto& t1 : reaching_high) {
    for (const auto& t2 : reaching_high) {
      const auto g = game(t1, t2, 3.0);
      c.expect(!is_chatroom_equilibrium(g, silent), "all silent accepted at lambda 3");
    }
  }
  // Silence needs every type inside [0, 0.6], which cannot hold 0.8.
  c.near(support_interval(kSilence, PeerDistanceProfile::dirac(0.8), 3.0).hi, 0.6, 1e-12,
         "silence region upper end");
  try {
    solve_chatroom(game(TypeSet::interval(0.2, 0.6, mu), TypeSet::interval(0.2, 0.6, mu), 3.0));
    c.expect(false, "types inside [0,0.6] accepted with beliefs on 0.8");
  } catch (const ModelError& e) {
    c.expect(e.kind() == ErrorKind::kIncompatibleBelief, "wrong error for incompatible types");
  }

  testing::Rng rng(2);
  for (int n = 0; n < 500; ++n) {
    auto random_types = [&]() {
      if (n % 2 == 0) {
        std::vector<double> v{0.8};
        for (int k = testing::uniform_int(rng, 0, 3); k > 0; --k) {
          v.push_back(testing::random_credence(rng, mu));
        }
        return TypeSet::finite(v, mu);
      }
      return TypeSet::interval(testing::uniform(rng, 0.1 + 1e-6, 0.8),
                               testing::uniform(rng, 0.8, 0.9 - 1e-6), mu);
    };
    const auto eq = solve_chatroom(game(random_types(), random_types(), 6.0));
    c.expect(eq.exists() && eq.status == Multiplicity::kUnique &&
                 eq.actions == std::vector<ReceiverAction>{kApprove, kApprove},
             "lambda 6 did not give a unique all-approve");
  }
}

void ally_and_sceptic(Check& c) {
  const EvidenceRelation mu(0.02, 0.01);
  SenderContext ctx{0.7, {0.019, 0.012}, mu, 1, 0};
  c.near(similarity_status_quo(ctx), 0.7, 1e-15, "status quo");
  c.near(worldview_posterior(0.019, mu), 18.0 / 19.0, 1e-12, "first posterior");
  c.near(worldview_posterior(0.012, mu), 1.0 / 3.0, 1e-12, "second posterior");
  c.near(send_gain(ctx), 0.7 - 35.0 / 57.0, 1e-12, "gain");
  const auto own = TypeSet::singleton(credence_from_prior(0.7, mu), mu);
  c.expect(decide_send(own, SecondOrderBelief::dirac({0.019, 0.012}), mu, SendGate::root()) ==
               SenderAction::kSend,
           "expected Send");
  c.expect(decide_send(own, SecondOrderBelief::dirac({0.019, 0.019, 0.019, 0.012}), mu,
                       SendGate::root()) == SenderAction::kNoSend,
           "three replicas: expected NoSend");
}

void canonical_cascade(Check& c) {
  const auto tree = testing::canonical_tree();
  const auto params = testing::canonical_params();
  const auto beliefs = dirac_truth_beliefs(tree, params);
  const auto r = solve_global(tree, testing::kCanonicalMu, params, beliefs);
  c.expect(r.status == Multiplicity::kUnique, "uniqueness not flagged");
  for (const char* n : {"2", "3", "4", "9", "10"}) {
    c.expect(r.receiver_action[*tree.find(n)] == kSilence, std::string("agent ") + n + " not silent");
  }
  for (const char* n : {"5", "6", "7", "8"}) {
    c.expect(r.receiver_action[*tree.find(n)] == kDisapprove,
             std::string("agent ") + n + " not disapproving");
  }
  for (const char* n : {"1", "2", "3", "4"}) {
    c.expect(r.sender_action[*tree.find(n)] == SenderAction::kSend,
             std::string("agent ") + n + " not sending");
  }
  const auto all = oracle::oracle_global(tree, testing::kCanonicalMu, params, beliefs, 10);
  c.expect(all.size() == 1, "enumeration found " + std::to_string(all.size()) + " equilibria");
  c.expect(!all.empty() && all.front() == oracle::profile_of(r), "enumeration disagrees");
}

void rooting(Check& c) {
  const auto graph = undirected_closure(testing::canonical_tree());
  c.expect(validate_graph(graph).valid(), "closure rejected");
  const auto params = testing::canonical_params();
  const auto reach =
      reach_by_root(graph, testing::kCanonicalMu, params, dirac_truth_builder(params), 4);
  const auto& r1 = reach[*graph.find("1")];
  const auto& r5 = reach[*graph.find("5")];
  c.expect(r1.reach() == 10, "root 1 reach " + std::to_string(r1.reach()));
  c.expect(r5.reach() == 1, "root 5 reach " + std::to_string(r5.reach()));
  c.expect(r5.result && r5.result->sender_action[r5.root] == SenderAction::kNoSend,
           "root 5 should not send");
}

void properties(Check& c) {
  using namespace testing;
  struct Suite {
    const char* name;
    std::function<PropertyTally(Rng&)> run;
  };
  const std::vector<Suite> suites{
      {"interval chain", [](Rng& r) { return interval_chain_property(r, 10000); }},
      {"intermediate action", [](Rng& r) { return intermediate_action_property(r, 10000); }},
      {"capture and coverage", [](Rng& r) { return capture_property(r, 10000); }},
      {"disapproval persistence", [](Rng& r) { return disapproval_persistence_property(r, 10000); }},
      {"lambda star dominance", [](Rng& r) { return dominance_property(r, 10000); }},
      {"nu regions", [](Rng& r) { return nu_shape_property(r, 10000); }},
      {"gate monotonicity", [](Rng& r) { return gate_monotonicity_property(r, 1000); }},
      {"chatroom oracle", [](Rng& r) { return chatroom_oracle_property(r, 10000); }},
      {"cascade oracle", [](Rng& r) { return global_oracle_property(r, 10000); }},
  };
  std::uint64_t seed = 20260101;
  for (const auto& s : suites) {
    Rng rng(seed++);
    const auto t = s.run(rng);
    std::printf("      %-24s draws=%-6ld violations=%ld\n", s.name, t.draws, t.violations);
    c.expect(t.ok(), std::string(s.name) + ": " + t.first);
  }
}

void comparison(Check& c) {
  const std::vector<double> peers{0.0, 1.0};
  const auto d = PeerDistanceProfile::dirac(peer_mean(peers));
  const double want_u[] = {-0.7, -0.3, -1.3};
  const double want_alt[] = {-0.7, -0.8, -1.3};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto a = kReceiverActions[k];
    c.near(utility(a, 0.2, d, 1.0), want_u[k], 1e-12, "u(" + std::string(to_string(a)) + ")");
    c.near(alt_utility(a, 0.2, peers, 1.0), want_alt[k], 1e-12,
           "alt u(" + std::string(to_string(a)) + ")");
  }
  c.expect(best_actions(0.2, d, 1.0) == ActionSet{kSilence}, "mean-based argmax");
  ActionSet alt_best;
  double top = -1e9;
  for (auto a : kReceiverActions) top = std::max(top, alt_utility(a, 0.2, peers, 1.0));
  for (auto a : kReceiverActions) {
    if (alt_utility(a, 0.2, peers, 1.0) >= top - 1e-12) alt_best.insert(a);
  }
  c.expect(alt_best == ActionSet{kDisapprove}, "per-peer argmax");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    void (*run)(Check&);
  };
  const Criterion criteria[] = {
      {1, "low-credence regimes and high-sensitivity thresholds", low_credence_regimes},
      {2, "beliefs at 0.8: silence ruled out, approval unique at 6", shared_belief_at_08},
      {3, "ally and sceptic: send gain and replica reversal", ally_and_sceptic},
      {4, "canonical cascade reproduced and unique", canonical_cascade},
      {5, "rooting the closure at 1 and at 5", rooting},
      {6, "property suites", properties},
      {7, "mean-based versus per-peer utility", comparison},
  };
  int failed = 0;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& cr : criteria) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = c.failures.empty();
    failed += ok ? 0 : 1;
    std::printf("%s  %d  %-58s (%d checks, %.2fs)\n", ok ? "PASS" : "FAIL", cr.id, cr.name,
                c.count, secs);
    for (std::size_t k = 0; k < c.failures.size() && k < 5; ++k) {
      std::printf("      %s\n", c.failures[k].c_str());
    }
  }
  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of %zu criteria passed in %.1fs\n",
              static_cast<int>(std::size(criteria)) - failed, std::size(criteria), total);
  return failed;
}
