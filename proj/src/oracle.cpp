#include "chatnet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace chatnet::oracle {

namespace {

// Utility rows written out per action rather than through a shared
// distance formula.
std::array<double, 3> table_utilities(double theta, const PeerDistanceProfile& d,
                                      double lambda) {
  const double silence_gap = theta <= 0.5 ? 0.5 - theta : theta - 0.5;
  return {-theta - lambda * d.d0, -(silence_gap + lambda * d.d05),
          theta - 1.0 - lambda * d.d1};
}

ActionSet argmax(const std::array<double, 3>& u, double tolerance) {
  double best = u[0];
  for (double x : u) best = std::max(best, x);
  ActionSet out;
  for (std::size_t k = 0; k < 3; ++k) {
    if (u[k] >= best - tolerance) out.insert(kReceiverActions[k]);
  }
  return out;
}

std::vector<double> finite_types(const TypeSet& t) {
  if (t.is_interval()) {
    throw ModelError(ErrorKind::kInvalidGame,
                     "oracle handles finite type sets only");
  }
  return {t.values().begin(), t.values().end()};
}

// Expected receiver utility under a belief, averaging over the peer
// profile of each atom.
double expected_utility(double a, double theta, double lambda,
                        const SecondOrderBelief& belief) {
  double total = 0.0;
  for (const auto& atom : belief.atoms()) {
    double sum = 0.0;
    for (double x : atom.profile) sum += x;
    const double mean = sum / static_cast<double>(atom.profile.size());
    total += atom.weight * -(std::abs(a - theta) + lambda * std::abs(a - mean));
  }
  return total;
}

bool optimal_for_all(ReceiverAction a, const TypeSet& types, double lambda,
                     const SecondOrderBelief& belief, double tolerance) {
  for (double theta : finite_types(types)) {
    std::array<double, 3> u{};
    for (std::size_t k = 0; k < 3; ++k) {
      u[k] = expected_utility(action_value(kReceiverActions[k]), theta, lambda,
                              belief);
    }
    if (!argmax(u, tolerance).contains(a)) return false;
  }
  return true;
}

// Gain via Bayes' rule on the prior rather than the closed-form ratio.
double expected_gain(double own_credence, const SecondOrderBelief& belief,
                     const EvidenceRelation& mu) {
  const double a = mu.given_c(), b = mu.given_not_c();
  const double tau = (own_credence - b) / (a - b);
  double total = 0.0;
  for (const auto& atom : belief.atoms()) {
    double gain = 0.0;
    for (double theta : atom.profile) {
      const double p = (theta - b) / (a - b);
      const double q = a * p / (a * p + b * (1.0 - p));
      gain += std::abs(p - tau) - std::abs(q - tau);
    }
    total += atom.weight * gain;
  }
  return total;
}

bool send_condition(const TypeSet& types, const SecondOrderBelief& belief,
                    const EvidenceRelation& mu, int slack, double tolerance) {
  for (double theta : finite_types(types)) {
    if (!(slack * expected_gain(theta, belief, mu) > tolerance)) return false;
  }
  return true;
}

}  // namespace

ActionSet oracle_best_actions(double theta, const PeerDistanceProfile& d,
                              double lambda, double tolerance) {
  return argmax(table_utilities(theta, d, lambda), tolerance);
}

std::vector<double> oracle_support_set(ReceiverAction a,
                                       const PeerDistanceProfile& d,
                                       double lambda, GridSpec grid) {
  std::vector<double> out;
  const auto steps = static_cast<long>(std::llround(1.0 / grid.step));
  for (long k = 0; k <= steps; ++k) {
    const double theta = std::min(1.0, static_cast<double>(k) * grid.step);
    if (oracle_best_actions(theta, d, lambda, grid.tolerance).contains(a)) {
      out.push_back(theta);
    }
  }
  return out;
}

std::optional<double> oracle_min_lambda(double theta,
                                        const PeerDistanceProfile& d,
                                        ReceiverAction target, double hi,
                                        double precision) {
  auto ok = [&](double lambda) {
    return oracle_best_actions(theta, d, lambda, 0.0).contains(target);
  };
  if (!ok(hi)) return std::nullopt;
  if (ok(0.0)) return 0.0;
  double lo = 0.0;
  while (hi - lo > precision) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::vector<std::vector<ReceiverAction>> oracle_chatroom(
    const ChatroomGame& game, double tolerance) {
  const std::size_t m = game.receivers.size();
  std::vector<std::vector<ReceiverAction>> out;
  std::vector<std::size_t> digits(m, 0);
  while (true) {
    std::vector<ReceiverAction> profile;
    for (std::size_t k : digits) profile.push_back(kReceiverActions[k]);
    bool ok = true;
    for (std::size_t k = 0; k < m && ok; ++k) {
      const auto& seat = game.receivers[k];
      ok = optimal_for_all(profile[k], seat.types, seat.lambda, seat.belief,
                           tolerance);
    }
    if (ok) out.push_back(profile);
    std::size_t pos = 0;
    while (pos < m && ++digits[pos] == 3) digits[pos++] = 0;
    if (pos == m) break;
  }
  return out;
}

GlobalProfile profile_of(const CascadeResult& result) {
  return {result.receiver_action, result.sender_action};
}

std::vector<GlobalProfile> oracle_global(const OrderedTree& tree,
                                         const EvidenceRelation& mu,
                                         std::span<const AgentParams> params,
                                         std::span<const AgentBeliefs> beliefs,
                                         std::size_t max_agents,
                                         double tolerance) {
  const std::size_t n = tree.size();
  if (n > max_agents) {
    throw ModelError(ErrorKind::kInstanceTooLarge,
                     "oracle_global is capped at " + std::to_string(max_agents) +
                         " agents");
  }
  std::vector<std::size_t> receivers, senders;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != tree.root()) receivers.push_back(i);
    if (!tree.terminal(i)) senders.push_back(i);
  }
  // Mixed radix: three reactions per receiver, two choices per sender.
  std::vector<std::size_t> radix;
  for (std::size_t k = 0; k < receivers.size(); ++k) radix.push_back(3);
  for (std::size_t k = 0; k < senders.size(); ++k) radix.push_back(2);
  std::vector<std::size_t> digits(radix.size(), 0);

  std::set<GlobalProfile> found;
  std::vector<ReceiverAction> react(n, ReceiverAction::kSilence);
  std::vector<bool> sends(n, false);
  while (true) {
    for (std::size_t k = 0; k < receivers.size(); ++k) {
      react[receivers[k]] = kReceiverActions[digits[k]];
    }
    for (std::size_t k = 0; k < senders.size(); ++k) {
      sends[senders[k]] = digits[receivers.size() + k] == 0;
    }
    // Reached: the root, and anyone whose parent is reached and sends.
    std::vector<bool> reached(n, false);
    std::vector<std::size_t> stack{tree.root()};
    reached[tree.root()] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      if (tree.terminal(u) || !sends[u]) continue;
      for (std::size_t c : tree.children(u)) {
        reached[c] = true;
        stack.push_back(c);
      }
    }

    bool ok = true;
    for (std::size_t i : senders) {
      if (!ok) break;
      if (!reached[i]) continue;
      int slack = 1;
      if (const auto p = tree.parent(i)) {
        int zeros = 0;
        for (std::size_t sib : tree.children(*p)) {
          if (react[sib] == ReceiverAction::kDisapprove) ++zeros;
        }
        slack = std::max(params[i].ell - zeros, 0);
      }
      const bool should = send_condition(params[i].types, *beliefs[i].sending,
                                         mu, slack, tolerance);
      if (should != sends[i]) {
        ok = false;
        break;
      }
      if (!sends[i]) continue;
      for (std::size_t j : tree.children(i)) {
        if (!optimal_for_all(react[j], params[j].types, params[j].lambda,
                             *beliefs[j].receiving, tolerance)) {
          ok = false;
          break;
        }
      }
    }

    if (ok) {
      GlobalProfile g;
      g.receiver.assign(n, std::nullopt);
      g.sender.assign(n, std::nullopt);
      for (std::size_t i = 0; i < n; ++i) {
        if (!reached[i]) continue;
        if (i != tree.root()) g.receiver[i] = react[i];
        if (!tree.terminal(i)) {
          g.sender[i] = sends[i] ? SenderAction::kSend : SenderAction::kNoSend;
        }
      }
      found.insert(std::move(g));
    }

    std::size_t pos = 0;
    while (pos < radix.size() && ++digits[pos] == radix[pos]) digits[pos++] = 0;
    if (pos == radix.size()) break;
  }
  return {found.begin(), found.end()};
}

}  // namespace chatnet::oracle
