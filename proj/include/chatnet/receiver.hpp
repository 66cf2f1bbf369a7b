#pragma once

// The receiver's reaction problem: disapprove (0), stay silent (0.5) or
// approve (1), scored by distance to one's own credence plus weighted
// distance to the peers' mean credence.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "chatnet/errors.hpp"

namespace chatnet {

enum class ReceiverAction : std::uint8_t { kDisapprove, kSilence, kApprove };

inline constexpr std::array<ReceiverAction, 3> kReceiverActions = {
    ReceiverAction::kDisapprove, ReceiverAction::kSilence,
    ReceiverAction::kApprove};

constexpr double action_value(ReceiverAction a) {
  switch (a) {
    case ReceiverAction::kDisapprove: return 0.0;
    case ReceiverAction::kSilence: return 0.5;
    case ReceiverAction::kApprove: return 1.0;
  }
  return 0.0;
}

constexpr std::size_t action_index(ReceiverAction a) {
  return static_cast<std::size_t>(a);
}

std::string_view to_string(ReceiverAction a);

// Small value set over the three receiver actions, iterated in ascending
// action value.
class ActionSet {
 public:
  constexpr ActionSet() = default;
  constexpr ActionSet(std::initializer_list<ReceiverAction> actions) {
    for (auto a : actions) insert(a);
  }

  constexpr void insert(ReceiverAction a) { bits_ |= bit(a); }
  constexpr bool contains(ReceiverAction a) const { return bits_ & bit(a); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const {
    return (bits_ & 1u) + ((bits_ >> 1) & 1u) + ((bits_ >> 2) & 1u);
  }
  constexpr ActionSet intersect(ActionSet other) const {
    ActionSet out;
    out.bits_ = bits_ & other.bits_;
    return out;
  }
  std::vector<ReceiverAction> members() const;

  friend constexpr bool operator==(ActionSet, ActionSet) = default;

 private:
  static constexpr std::uint8_t bit(ReceiverAction a) {
    return static_cast<std::uint8_t>(1u << action_index(a));
  }
  std::uint8_t bits_ = 0;
};

// Expected distance between each action and the peers' mean credence.
struct PeerDistanceProfile {
  double d0 = 0.0;
  double d05 = 0.0;
  double d1 = 0.0;

  // Point-mass belief on a peer mean b.
  static PeerDistanceProfile dirac(double peer_mean);

  double at(ReceiverAction a) const {
    switch (a) {
      case ReceiverAction::kDisapprove: return d0;
      case ReceiverAction::kSilence: return d05;
      case ReceiverAction::kApprove: return d1;
    }
    return d0;
  }

  // The action with strictly smallest distance, if there is one.
  std::optional<ReceiverAction> strict_minimizer(
      double tolerance = kTolerance) const;
};

// Throws ModelError(kRangeViolation) on negative entries or d0 + d1 < 1.
void validate(const PeerDistanceProfile& d);

// One atom of a discrete second-order belief: a profile of peer credences
// and its probability.
struct BeliefAtom {
  std::vector<double> profile;
  double weight = 1.0;
};

class SecondOrderBelief {
 public:
  SecondOrderBelief() = default;
  // Throws ModelError(kEmptySupport) when empty, kRangeViolation on
  // non-positive weights, weights not summing to one, or ragged profiles.
  explicit SecondOrderBelief(std::vector<BeliefAtom> atoms);

  static SecondOrderBelief dirac(std::vector<double> profile);

  std::span<const BeliefAtom> atoms() const { return atoms_; }
  std::size_t dimension() const {
    return atoms_.empty() ? 0 : atoms_.front().profile.size();
  }

 private:
  std::vector<BeliefAtom> atoms_;
};

double peer_mean(std::span<const double> profile);

PeerDistanceProfile peer_distance(const SecondOrderBelief& belief);

double utility(ReceiverAction a, double theta, const PeerDistanceProfile& d,
               double lambda);

ActionSet best_actions(double theta, const PeerDistanceProfile& d,
                       double lambda, double tolerance = kTolerance);

// Closed set of credences in [0,1] at which an action is optimal.
struct SupportInterval {
  ReceiverAction action = ReceiverAction::kDisapprove;
  bool empty = true;
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double theta, double tolerance = kTolerance) const {
    return !empty && theta >= lo - tolerance && theta <= hi + tolerance;
  }
  // True iff [a, b] lies inside the interval.
  bool covers(double a, double b, double tolerance = kTolerance) const {
    return contains(a, tolerance) && contains(b, tolerance);
  }
};

SupportInterval support_interval(ReceiverAction a,
                                 const PeerDistanceProfile& d, double lambda,
                                 double tolerance = kTolerance);

struct IntervalEndpoint {
  ReceiverAction action;
  bool upper;
  double value;
};

// Endpoints in the canonical order lower(0), lower(0.5), upper(0),
// lower(1), upper(0.5), upper(1), skipping empty intervals.
struct IntervalOrdering {
  std::array<SupportInterval, 3> intervals;
  std::vector<IntervalEndpoint> chain;
  bool holds = true;
};

// Throws ModelError(kOrderingViolation) if the chain is not monotone.
IntervalOrdering interval_ordering_check(const PeerDistanceProfile& d,
                                         double lambda,
                                         double tolerance = kTolerance);

// Smallest sensitivity at which `target` is a best action. Empty when the
// target is not the strict minimizer of d.
std::optional<double> min_lambda_for_action(double theta,
                                            const PeerDistanceProfile& d,
                                            ReceiverAction target);

// Sensitivity above which the d-minimizing action is optimal for every
// credence in [0,1]. Empty without a strict minimizer.
std::optional<double> lambda_star(const PeerDistanceProfile& d);

// Alternative scoring against each peer individually rather than against
// the peers' mean. Throws ModelError(kEmptyPeers) on an empty peer list.
double alt_utility(ReceiverAction a, double theta,
                   std::span<const double> peer_thetas, double lambda);

}  // namespace chatnet
