#include "chatnet/chatroom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace chatnet {

TypeSet TypeSet::finite(std::vector<double> values,
                        const EvidenceRelation& mu) {
  if (values.empty()) {
    throw ModelError(ErrorKind::kInvalidGame, "type set is empty");
  }
  for (double v : values) Credence(v, mu);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  TypeSet out;
  out.values_ = std::move(values);
  out.lo_ = out.values_.front();
  out.hi_ = out.values_.back();
  return out;
}

TypeSet TypeSet::interval(double lo, double hi, const EvidenceRelation& mu) {
  Credence(lo, mu);
  Credence(hi, mu);
  if (lo > hi) {
    throw ModelError(ErrorKind::kInvalidGame, "type interval has lo > hi");
  }
  TypeSet out;
  out.interval_ = true;
  out.lo_ = lo;
  out.hi_ = hi;
  return out;
}

TypeSet TypeSet::full_range(const EvidenceRelation& mu) {
  TypeSet out;
  out.interval_ = true;
  out.lo_ = mu.given_not_c();
  out.hi_ = mu.given_c();
  return out;
}

double TypeSet::centroid() const noexcept {
  if (interval_) return 0.5 * (lo_ + hi_);
  return std::accumulate(values_.begin(), values_.end(), 0.0) /
         static_cast<double>(values_.size());
}

bool TypeSet::contains(double x, double tolerance) const noexcept {
  if (interval_) return x >= lo_ - tolerance && x <= hi_ + tolerance;
  return std::any_of(values_.begin(), values_.end(), [&](double v) {
    return std::abs(v - x) <= tolerance;
  });
}

std::vector<std::size_t> ChatroomGame::peers_of(std::size_t seat) const {
  std::vector<std::size_t> peers{root};
  for (std::size_t k = 0; k < receivers.size(); ++k) {
    if (k != seat) peers.push_back(receivers[k].agent);
  }
  return peers;
}

const TypeSet& ChatroomGame::types_of(std::size_t agent) const {
  if (agent == root) return root_types;
  for (const auto& seat : receivers) {
    if (seat.agent == agent) return seat.types;
  }
  throw ModelError(ErrorKind::kInvalidGame, "agent is not in the chatroom");
}

void validate(const ChatroomGame& game, double tolerance) {
  if (game.receivers.empty()) {
    throw ModelError(ErrorKind::kInvalidGame, "chatroom has no receivers");
  }
  for (std::size_t k = 0; k < game.receivers.size(); ++k) {
    const auto& seat = game.receivers[k];
    if (seat.agent == game.root) {
      throw ModelError(ErrorKind::kInvalidGame, "root listed as a receiver");
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (game.receivers[j].agent == seat.agent) {
        throw ModelError(ErrorKind::kInvalidGame, "receiver listed twice");
      }
    }
    if (!(seat.lambda >= 0.0) || !std::isfinite(seat.lambda)) {
      throw ModelError(ErrorKind::kInvalidGame,
                       "sensitivity must be finite and non-negative");
    }
    if (seat.belief.atoms().empty()) {
      throw ModelError(ErrorKind::kEmptySupport, "receiver has no belief");
    }
    const auto peers = game.peers_of(k);
    if (seat.belief.dimension() != peers.size()) {
      std::ostringstream os;
      os << "belief of agent " << seat.agent << " has dimension "
         << seat.belief.dimension() << ", chatroom needs " << peers.size();
      throw ModelError(ErrorKind::kInvalidGame, os.str());
    }
    for (const auto& atom : seat.belief.atoms()) {
      for (std::size_t c = 0; c < peers.size(); ++c) {
        if (!game.types_of(peers[c]).contains(atom.profile[c], tolerance)) {
          std::ostringstream os;
          os << "belief of agent " << seat.agent << " puts credence "
             << atom.profile[c] << " on agent " << peers[c]
             << " outside that agent's types";
          throw ModelError(ErrorKind::kIncompatibleBelief, os.str());
        }
      }
    }
  }
}

std::string_view to_string(Multiplicity m) {
  switch (m) {
    case Multiplicity::kUnique: return "unique";
    case Multiplicity::kMultiple: return "multiple";
    case Multiplicity::kNone: return "none";
  }
  return "?";
}

ActionSet eligible_actions(const ReceiverSeat& seat, double tolerance) {
  const PeerDistanceProfile d = peer_distance(seat.belief);
  if (seat.types.is_interval()) {
    // Utilities are piecewise linear in the credence, so containment in
    // the support interval is exact.
    ActionSet out;
    for (auto a : kReceiverActions) {
      const auto iv = support_interval(a, d, seat.lambda, tolerance);
      if (iv.covers(seat.types.lo(), seat.types.hi(), tolerance)) {
        out.insert(a);
      }
    }
    return out;
  }
  ActionSet out{ReceiverAction::kDisapprove, ReceiverAction::kSilence,
                ReceiverAction::kApprove};
  for (double theta : seat.types.values()) {
    out = out.intersect(best_actions(theta, d, seat.lambda, tolerance));
  }
  return out;
}

ReceiverAction select_action(ActionSet eligible, const TypeSet& types) {
  const double c = types.centroid();
  const auto members = eligible.members();
  // members() is ascending, so strict comparison keeps the lower action.
  ReceiverAction best = members.front();
  for (auto a : members) {
    if (std::abs(action_value(a) - c) < std::abs(action_value(best) - c)) {
      best = a;
    }
  }
  return best;
}

ChatroomEquilibrium solve_chatroom(const ChatroomGame& game,
                                   double tolerance) {
  validate(game, tolerance);
  ChatroomEquilibrium out;
  out.status = Multiplicity::kUnique;
  // Payoffs do not depend on the other receivers' actions, so each seat
  // is solved on its own.
  for (std::size_t k = 0; k < game.receivers.size(); ++k) {
    const ActionSet e = eligible_actions(game.receivers[k], tolerance);
    out.eligible.push_back(e);
    if (e.empty()) {
      if (!out.failing_seat) out.failing_seat = k;
      out.status = Multiplicity::kNone;
    } else if (e.size() > 1 && out.status == Multiplicity::kUnique) {
      out.status = Multiplicity::kMultiple;
    }
  }
  if (out.status == Multiplicity::kNone) return out;
  for (std::size_t k = 0; k < game.receivers.size(); ++k) {
    out.actions.push_back(
        select_action(out.eligible[k], game.receivers[k].types));
  }
  return out;
}

bool is_chatroom_equilibrium(const ChatroomGame& game,
                             std::span<const ReceiverAction> actions,
                             double tolerance) {
  validate(game, tolerance);
  if (actions.size() != game.receivers.size()) return false;
  for (std::size_t k = 0; k < actions.size(); ++k) {
    if (!eligible_actions(game.receivers[k], tolerance).contains(actions[k])) {
      return false;
    }
  }
  return true;
}

AllTypesResult equilibrium_exists_for_all_types(const ChatroomGame& game,
                                                const EvidenceRelation& mu,
                                                double tolerance) {
  ChatroomGame widened = game;
  widened.root_types = TypeSet::full_range(mu);
  for (auto& seat : widened.receivers) seat.types = TypeSet::full_range(mu);
  AllTypesResult out;
  out.witness = solve_chatroom(widened, tolerance);
  out.exists = out.witness.exists();
  return out;
}

}  // namespace chatnet
