#pragma once

// One chatroom as a Bayesian game: a root who only waits and receivers who
// each pick a reaction that must be optimal for every one of their types.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chatnet/belief.hpp"
#include "chatnet/receiver.hpp"

namespace chatnet {

// The credences an agent may hold: finitely many values, or a closed
// interval. Members are validated against the evidence relation.
class TypeSet {
 public:
  static TypeSet finite(std::vector<double> values, const EvidenceRelation& mu);
  static TypeSet singleton(double value, const EvidenceRelation& mu) {
    return finite({value}, mu);
  }
  static TypeSet interval(double lo, double hi, const EvidenceRelation& mu);
  // Closed hull of every admissible credence. The endpoints themselves are
  // not admissible; the hull is used for containment checks only.
  static TypeSet full_range(const EvidenceRelation& mu);

  bool is_interval() const noexcept { return interval_; }
  bool is_singleton() const noexcept {
    return !interval_ && values_.size() == 1;
  }
  // Sorted, deduplicated members of a finite set (empty for intervals).
  std::span<const double> values() const noexcept { return values_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double centroid() const noexcept;
  bool contains(double x, double tolerance = kTolerance) const noexcept;

  friend bool operator==(const TypeSet&, const TypeSet&) = default;

 private:
  TypeSet() = default;

  bool interval_ = false;
  std::vector<double> values_;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

struct ReceiverSeat {
  std::size_t agent = 0;
  TypeSet types;
  double lambda = 0.0;
  // Over the other members of the chatroom, ordered root first and then
  // the remaining receivers in seat order.
  SecondOrderBelief belief;
};

struct ChatroomGame {
  std::size_t root = 0;
  TypeSet root_types;
  std::vector<ReceiverSeat> receivers;

  // Agents whose credences receiver `seat` averages over, in belief order.
  std::vector<std::size_t> peers_of(std::size_t seat) const;
  const TypeSet& types_of(std::size_t agent) const;
};

// Throws ModelError: kInvalidGame on structural problems, and
// kIncompatibleBelief when a belief puts mass outside a peer's types.
void validate(const ChatroomGame& game, double tolerance = kTolerance);

enum class Multiplicity { kUnique, kMultiple, kNone };

std::string_view to_string(Multiplicity m);

struct ChatroomEquilibrium {
  Multiplicity status = Multiplicity::kNone;
  // Selected reaction per seat; empty when status is kNone.
  std::vector<ReceiverAction> actions;
  // Actions optimal for every type of each seat.
  std::vector<ActionSet> eligible;
  // First seat with no eligible action, when status is kNone.
  std::optional<std::size_t> failing_seat;

  bool exists() const { return status != Multiplicity::kNone; }
};

// Actions that are best responses for every type of the seat.
ActionSet eligible_actions(const ReceiverSeat& seat,
                           double tolerance = kTolerance);

// Deterministic pick among eligible actions: closest to the centroid of
// the seat's types, ties to the lower action.
ReceiverAction select_action(ActionSet eligible, const TypeSet& types);

ChatroomEquilibrium solve_chatroom(const ChatroomGame& game,
                                   double tolerance = kTolerance);

// True iff the constant profile satisfies both equilibrium conditions.
bool is_chatroom_equilibrium(const ChatroomGame& game,
                             std::span<const ReceiverAction> actions,
                             double tolerance = kTolerance);

struct AllTypesResult {
  bool exists = false;
  ChatroomEquilibrium witness;
};

// Solves the game with every type set widened to the full admissible range.
AllTypesResult equilibrium_exists_for_all_types(const ChatroomGame& game,
                                                const EvidenceRelation& mu,
                                                double tolerance = kTolerance);

}  // namespace chatnet
