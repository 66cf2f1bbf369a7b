#pragma once

// Forwarding decision: a sender transmits when the message is expected to
// pull her receivers' worldviews toward her own prior and not too many of
// her fellow receivers openly disapproved.

#include <string_view>
#include <vector>

#include "chatnet/belief.hpp"
#include "chatnet/chatroom.hpp"

namespace chatnet {

enum class SenderAction { kSend, kNoSend };

std::string_view to_string(SenderAction a);

struct SenderContext {
  double own_prior = 0.5;
  std::vector<double> receiver_credences;
  EvidenceRelation mu;
  int ell = 1;
  // Zeros among the sender's own receiving chatroom, herself included.
  int disapproval_count = 0;
};

// Sum of prior gaps between each receiver and the sender.
double similarity_status_quo(const SenderContext& ctx);

// Status quo minus the posterior gaps after the message is delivered.
double send_gain(const SenderContext& ctx);

// max(ell - disapprovals, 0) times the gain.
double send_payoff(const SenderContext& ctx);

// Per-receiver contribution of credence x to the gain of a sender with
// prior own_prior. Throws ModelError(kDomainError) outside the admissible
// credence range.
double nu_value(double credence, double own_prior, const EvidenceRelation& mu);

struct NuBreakpoints {
  double lo;  // end of the first increasing stretch
  double hi;  // start of the final increasing stretch
};

NuBreakpoints nu_breakpoints(double own_prior, const EvidenceRelation& mu);

// The disapproval gate in front of a sender. The root has no receiving
// chatroom, so her gate is always open.
struct SendGate {
  int ell = 1;
  int disapprovals = 0;
  bool always_open = false;

  static SendGate root() { return {0, 0, true}; }
  int slack() const { return always_open ? 1 : std::max(ell - disapprovals, 0); }
  bool open() const { return slack() >= 1; }
};

// Gain averaged over a belief whose atoms are receiver credence profiles.
double expected_send_gain(double own_prior, const SecondOrderBelief& belief,
                          const EvidenceRelation& mu);

// Sends iff the gate is open and the expected gain is strictly positive
// (beyond tolerance) for every type of the sender.
SenderAction decide_send(const TypeSet& types, const SecondOrderBelief& belief,
                         const EvidenceRelation& mu, SendGate gate,
                         double tolerance = kTolerance);

}  // namespace chatnet
