#include "chatnet/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace chatnet {

std::string_view to_string(ReceiverAction a) {
  switch (a) {
    case ReceiverAction::kDisapprove: return "0";
    case ReceiverAction::kSilence: return "0.5";
    case ReceiverAction::kApprove: return "1";
  }
  return "?";
}

std::vector<ReceiverAction> ActionSet::members() const {
  std::vector<ReceiverAction> out;
  for (auto a : kReceiverActions) {
    if (contains(a)) out.push_back(a);
  }
  return out;
}

PeerDistanceProfile PeerDistanceProfile::dirac(double peer_mean) {
  return {std::abs(peer_mean), std::abs(0.5 - peer_mean),
          std::abs(1.0 - peer_mean)};
}

std::optional<ReceiverAction> PeerDistanceProfile::strict_minimizer(
    double tolerance) const {
  for (auto a : kReceiverActions) {
    bool strict = true;
    for (auto b : kReceiverActions) {
      if (b != a && !(at(a) < at(b) - tolerance)) strict = false;
    }
    if (strict) return a;
  }
  return std::nullopt;
}

void validate(const PeerDistanceProfile& d) {
  for (double v : {d.d0, d.d05, d.d1}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ModelError(ErrorKind::kRangeViolation,
                       "peer distances must be finite and non-negative");
    }
  }
  if (d.d0 + d.d1 < 1.0 - kTolerance) {
    throw ModelError(ErrorKind::kRangeViolation,
                     "peer distances violate d0 + d1 >= 1");
  }
}

SecondOrderBelief::SecondOrderBelief(std::vector<BeliefAtom> atoms)
    : atoms_(std::move(atoms)) {
  if (atoms_.empty()) {
    throw ModelError(ErrorKind::kEmptySupport, "belief has no atoms");
  }
  const std::size_t dim = atoms_.front().profile.size();
  double total = 0.0;
  for (const auto& atom : atoms_) {
    if (atom.profile.size() != dim) {
      throw ModelError(ErrorKind::kRangeViolation,
                       "belief atoms have differing profile dimensions");
    }
    if (!(atom.weight > 0.0) || !std::isfinite(atom.weight)) {
      throw ModelError(ErrorKind::kRangeViolation,
                       "belief atom weights must be positive");
    }
    total += atom.weight;
  }
  if (std::abs(total - 1.0) > kTolerance) {
    std::ostringstream os;
    os << "belief weights sum to " << total << ", expected 1";
    throw ModelError(ErrorKind::kRangeViolation, os.str());
  }
}

SecondOrderBelief SecondOrderBelief::dirac(std::vector<double> profile) {
  return SecondOrderBelief({BeliefAtom{std::move(profile), 1.0}});
}

double peer_mean(std::span<const double> profile) {
  if (profile.empty()) {
    throw ModelError(ErrorKind::kEmptyPeers, "peer profile is empty");
  }
  return std::accumulate(profile.begin(), profile.end(), 0.0) /
         static_cast<double>(profile.size());
}

PeerDistanceProfile peer_distance(const SecondOrderBelief& belief) {
  if (belief.atoms().empty()) {
    throw ModelError(ErrorKind::kEmptySupport, "belief has no atoms");
  }
  PeerDistanceProfile d;
  for (const auto& atom : belief.atoms()) {
    const double n = peer_mean(atom.profile);
    d.d0 += atom.weight * std::abs(n);
    d.d05 += atom.weight * std::abs(0.5 - n);
    d.d1 += atom.weight * std::abs(1.0 - n);
  }
  return d;
}

double utility(ReceiverAction a, double theta, const PeerDistanceProfile& d,
               double lambda) {
  return -(std::abs(action_value(a) - theta) + lambda * d.at(a));
}

ActionSet best_actions(double theta, const PeerDistanceProfile& d,
                       double lambda, double tolerance) {
  std::array<double, 3> u{};
  for (auto a : kReceiverActions) u[action_index(a)] = utility(a, theta, d, lambda);
  const double best = *std::max_element(u.begin(), u.end());
  ActionSet out;
  for (auto a : kReceiverActions) {
    if (u[action_index(a)] >= best - tolerance) out.insert(a);
  }
  return out;
}

namespace {

// Utility restricted to one linear piece of [0,1]: slope * theta + offset.
struct Linear {
  double slope;
  double offset;
};

Linear piece(ReceiverAction a, bool left_half, const PeerDistanceProfile& d,
             double lambda) {
  switch (a) {
    case ReceiverAction::kDisapprove:
      return {-1.0, -lambda * d.d0};
    case ReceiverAction::kSilence:
      return left_half ? Linear{1.0, -0.5 - lambda * d.d05}
                       : Linear{-1.0, 0.5 - lambda * d.d05};
    case ReceiverAction::kApprove:
      return {1.0, -1.0 - lambda * d.d1};
  }
  return {0.0, 0.0};
}

struct Range {
  bool empty;
  double lo;
  double hi;
};

// Solves u_a >= u_b for every rival b on [lo, hi], where all utilities
// are linear.
Range solve_piece(ReceiverAction a, bool left_half, double lo, double hi,
                  const PeerDistanceProfile& d, double lambda,
                  double tolerance) {
  const Linear ua = piece(a, left_half, d, lambda);
  for (auto b : kReceiverActions) {
    if (b == a) continue;
    const Linear ub = piece(b, left_half, d, lambda);
    const double slope = ua.slope - ub.slope;
    const double offset = ua.offset - ub.offset;
    // slope * theta + offset >= 0
    if (slope == 0.0) {
      if (offset < -tolerance) return {true, 0.0, 0.0};
    } else if (slope > 0.0) {
      lo = std::max(lo, -offset / slope);
    } else {
      hi = std::min(hi, -offset / slope);
    }
  }
  if (lo > hi + tolerance) return {true, 0.0, 0.0};
  if (lo > hi) lo = hi = 0.5 * (lo + hi);
  return {false, lo, hi};
}

}  // namespace

SupportInterval support_interval(ReceiverAction a,
                                 const PeerDistanceProfile& d, double lambda,
                                 double tolerance) {
  const Range left = solve_piece(a, true, 0.0, 0.5, d, lambda, tolerance);
  const Range right = solve_piece(a, false, 0.5, 1.0, d, lambda, tolerance);
  SupportInterval out{a, true, 0.0, 0.0};
  if (left.empty && right.empty) return out;
  out.empty = false;
  if (left.empty) {
    out.lo = right.lo;
    out.hi = right.hi;
  } else if (right.empty) {
    out.lo = left.lo;
    out.hi = left.hi;
  } else {
    // Both halves populated: the pieces must meet at 0.5.
    if (left.hi < 0.5 - tolerance || right.lo > 0.5 + tolerance) {
      throw std::logic_error("support set of an action is disconnected");
    }
    out.lo = left.lo;
    out.hi = right.hi;
  }
  return out;
}

IntervalOrdering interval_ordering_check(const PeerDistanceProfile& d,
                                         double lambda, double tolerance) {
  using enum ReceiverAction;
  IntervalOrdering out;
  for (auto a : kReceiverActions) {
    out.intervals[action_index(a)] = support_interval(a, d, lambda, tolerance);
  }
  const std::array<std::pair<ReceiverAction, bool>, 6> order = {{
      {kDisapprove, false},
      {kSilence, false},
      {kDisapprove, true},
      {kApprove, false},
      {kSilence, true},
      {kApprove, true},
  }};
  for (auto [a, upper] : order) {
    const auto& iv = out.intervals[action_index(a)];
    if (iv.empty) continue;
    out.chain.push_back({a, upper, upper ? iv.hi : iv.lo});
  }
  for (std::size_t k = 1; k < out.chain.size(); ++k) {
    if (out.chain[k].value < out.chain[k - 1].value - tolerance) {
      out.holds = false;
    }
  }
  if (!out.holds) {
    std::ostringstream os;
    os << "support interval chain is not monotone for d=(" << d.d0 << ", "
       << d.d05 << ", " << d.d1 << "), lambda=" << lambda;
    throw ModelError(ErrorKind::kOrderingViolation, os.str());
  }
  return out;
}

std::optional<double> min_lambda_for_action(double theta,
                                            const PeerDistanceProfile& d,
                                            ReceiverAction target) {
  const auto closest = d.strict_minimizer();
  if (!closest || *closest != target) return std::nullopt;
  // target beats b iff lambda * (d_b - d_t) >= |t - theta| - |b - theta|.
  double need = 0.0;
  const double own_gap = std::abs(action_value(target) - theta);
  for (auto b : kReceiverActions) {
    if (b == target) continue;
    const double numer = own_gap - std::abs(action_value(b) - theta);
    need = std::max(need, numer / (d.at(b) - d.at(target)));
  }
  return need;
}

std::optional<double> lambda_star(const PeerDistanceProfile& d) {
  const auto closest = d.strict_minimizer();
  if (!closest) return std::nullopt;
  // Each rival's threshold is piecewise linear in theta with kinks only at
  // the action values, so the supremum over [0,1] sits on one of them.
  double worst = 0.0;
  for (auto a : kReceiverActions) {
    worst = std::max(worst, *min_lambda_for_action(action_value(a), d, *closest));
  }
  return worst;
}

double alt_utility(ReceiverAction a, double theta,
                   std::span<const double> peer_thetas, double lambda) {
  if (peer_thetas.empty()) {
    throw ModelError(ErrorKind::kEmptyPeers, "alt_utility needs peers");
  }
  const double x = action_value(a);
  double spread = 0.0;
  for (double t : peer_thetas) spread += std::abs(x - t);
  return -(std::abs(x - theta) +
           lambda / static_cast<double>(peer_thetas.size()) * spread);
}

}  // namespace chatnet
