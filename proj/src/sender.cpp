#include "chatnet/sender.hpp"

#include <algorithm>
#include <cmath>

namespace chatnet {

std::string_view to_string(SenderAction a) {
  return a == SenderAction::kSend ? "S" : "NS";
}

double similarity_status_quo(const SenderContext& ctx) {
  double total = 0.0;
  for (double theta : ctx.receiver_credences) {
    total += std::abs(worldview_prior(theta, ctx.mu) - ctx.own_prior);
  }
  return total;
}

double send_gain(const SenderContext& ctx) {
  double after = 0.0;
  for (double theta : ctx.receiver_credences) {
    after += std::abs(worldview_posterior(theta, ctx.mu) - ctx.own_prior);
  }
  return similarity_status_quo(ctx) - after;
}

double send_payoff(const SenderContext& ctx) {
  const SendGate gate{ctx.ell, ctx.disapproval_count, false};
  return static_cast<double>(gate.slack()) * send_gain(ctx);
}

double nu_value(double credence, double own_prior,
                const EvidenceRelation& mu) {
  const Worldview w = worldview(credence, mu);
  return std::abs(own_prior - w.prior) - std::abs(own_prior - w.posterior);
}

NuBreakpoints nu_breakpoints(double own_prior, const EvidenceRelation& mu) {
  const double a = mu.given_c();
  const double b = mu.given_not_c();
  const double geometric = std::sqrt(a * b);
  // Credences whose posterior (resp. prior) equals the sender's prior.
  const double posterior_hit = a * b / (a - own_prior * (a - b));
  const double prior_hit = b + own_prior * (a - b);
  return {std::min(geometric, posterior_hit), std::max(geometric, prior_hit)};
}

double expected_send_gain(double own_prior, const SecondOrderBelief& belief,
                          const EvidenceRelation& mu) {
  double total = 0.0;
  for (const auto& atom : belief.atoms()) {
    double gain = 0.0;
    for (double theta : atom.profile) gain += nu_value(theta, own_prior, mu);
    total += atom.weight * gain;
  }
  return total;
}

SenderAction decide_send(const TypeSet& types, const SecondOrderBelief& belief,
                         const EvidenceRelation& mu, SendGate gate,
                         double tolerance) {
  if (!gate.open()) return SenderAction::kNoSend;
  std::vector<double> priors;
  if (types.is_interval()) {
    // The expected gain is piecewise linear in the sender's prior with
    // kinks at receivers' priors and posteriors; checking the interval ends
    // and every kink inside covers the whole type interval.
    const double lo = worldview_prior(types.lo(), mu);
    const double hi = worldview_prior(types.hi(), mu);
    priors = {lo, hi};
    for (const auto& atom : belief.atoms()) {
      for (double theta : atom.profile) {
        const Worldview w = worldview(theta, mu);
        for (double kink : {w.prior, w.posterior}) {
          if (kink > lo && kink < hi) priors.push_back(kink);
        }
      }
    }
  } else {
    for (double theta : types.values()) {
      priors.push_back(worldview_prior(theta, mu));
    }
  }
  const bool all_positive = std::all_of(priors.begin(), priors.end(), [&](double tau) {
    return expected_send_gain(tau, belief, mu) > tolerance;
  });
  return all_positive ? SenderAction::kSend : SenderAction::kNoSend;
}

}  // namespace chatnet
