#pragma once

// Brute-force reference implementations. They re-derive every quantity
// from the model's definitions instead of calling the engine's closed
// forms, and are exponential in instance size.

#include <compare>
#include <optional>
#include <vector>

#include "chatnet/network.hpp"

namespace chatnet::oracle {

struct GridSpec {
  double step = 1e-3;
  double tolerance = 1e-9;
};

ActionSet oracle_best_actions(double theta, const PeerDistanceProfile& d,
                              double lambda, double tolerance = kTolerance);

// Grid points of [0,1] at which `a` is optimal.
std::vector<double> oracle_support_set(ReceiverAction a,
                                       const PeerDistanceProfile& d,
                                       double lambda, GridSpec grid = {});

// Smallest lambda (by bisection on [0, hi]) at which `target` is optimal
// for theta; empty if it is not optimal even at hi.
std::optional<double> oracle_min_lambda(double theta,
                                        const PeerDistanceProfile& d,
                                        ReceiverAction target,
                                        double hi = 1e6, double precision = 1e-9);

// Every constant reaction profile satisfying both chatroom equilibrium
// conditions. Finite type sets only.
std::vector<std::vector<ReceiverAction>> oracle_chatroom(
    const ChatroomGame& game, double tolerance = kTolerance);

struct GlobalProfile {
  std::vector<std::optional<ReceiverAction>> receiver;
  std::vector<std::optional<SenderAction>> sender;

  friend auto operator<=>(const GlobalProfile&, const GlobalProfile&) = default;
};

GlobalProfile profile_of(const CascadeResult& result);

// Every action profile meeting the global equilibrium conditions on the
// reached part of the tree, with unreached agents projected to "not
// reached". Finite type sets only; throws ModelError(kInstanceTooLarge)
// above max_agents.
std::vector<GlobalProfile> oracle_global(const OrderedTree& tree,
                                         const EvidenceRelation& mu,
                                         std::span<const AgentParams> params,
                                         std::span<const AgentBeliefs> beliefs,
                                         std::size_t max_agents = 6,
                                         double tolerance = kTolerance);

}  // namespace chatnet::oracle
