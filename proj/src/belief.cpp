#include "chatnet/belief.hpp"

#include <cmath>
#include <sstream>

#include "chatnet/errors.hpp"

namespace chatnet {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kRangeViolation: return "RangeViolation";
    case ErrorKind::kOrderingViolation: return "OrderingViolation";
    case ErrorKind::kDomainError: return "DomainError";
    case ErrorKind::kEmptySupport: return "EmptySupport";
    case ErrorKind::kEmptyPeers: return "EmptyPeers";
    case ErrorKind::kInvalidGame: return "InvalidGame";
    case ErrorKind::kIncompatibleBelief: return "IncompatibleBelief";
    case ErrorKind::kInvalidTree: return "InvalidTree";
    case ErrorKind::kInvalidGraph: return "InvalidGraph";
    case ErrorKind::kInstanceTooLarge: return "InstanceTooLarge";
  }
  return "Unknown";
}

namespace {

bool strictly_inside(double x, double lo, double hi) {
  return x > lo + kTolerance && x < hi - kTolerance;
}

}  // namespace

EvidenceRelation::EvidenceRelation(double mu_given_c, double mu_given_not_c)
    : given_c_(mu_given_c), given_not_c_(mu_given_not_c) {
  if (!std::isfinite(mu_given_c) || !std::isfinite(mu_given_not_c)) {
    throw ModelError(ErrorKind::kRangeViolation,
                     "evidence likelihoods must be finite");
  }
  if (!strictly_inside(mu_given_c, 0.0, 1.0) ||
      !strictly_inside(mu_given_not_c, 0.0, 1.0)) {
    std::ostringstream os;
    os << "evidence likelihoods (" << mu_given_c << ", " << mu_given_not_c
       << ") must lie in (0,1)";
    throw ModelError(ErrorKind::kRangeViolation, os.str());
  }
  if (mu_given_c <= mu_given_not_c + kTolerance) {
    std::ostringstream os;
    os << "mu_given_c=" << mu_given_c << " must exceed mu_given_not_c="
       << mu_given_not_c;
    throw ModelError(ErrorKind::kOrderingViolation, os.str());
  }
}

bool EvidenceRelation::admits(double credence) const noexcept {
  return std::isfinite(credence) &&
         strictly_inside(credence, given_not_c_, given_c_);
}

EvidenceRelation validate_evidence(double mu_given_c, double mu_given_not_c) {
  return EvidenceRelation(mu_given_c, mu_given_not_c);
}

Credence::Credence(double value, const EvidenceRelation& mu) : value_(value) {
  if (!mu.admits(value)) {
    std::ostringstream os;
    os << "credence " << value << " outside (" << mu.given_not_c() << ", "
       << mu.given_c() << ")";
    throw ModelError(ErrorKind::kDomainError, os.str());
  }
}

double worldview_prior(double credence, const EvidenceRelation& mu) {
  const Credence theta(credence, mu);
  return (theta.value() - mu.given_not_c()) / (mu.given_c() - mu.given_not_c());
}

double worldview_posterior(double credence, const EvidenceRelation& mu) {
  return mu.given_c() / credence * worldview_prior(credence, mu);
}

Worldview worldview(double credence, const EvidenceRelation& mu) {
  return {worldview_prior(credence, mu), worldview_posterior(credence, mu)};
}

Credence credence_from_prior(double prior, const EvidenceRelation& mu) {
  if (!std::isfinite(prior) || !strictly_inside(prior, 0.0, 1.0)) {
    std::ostringstream os;
    os << "prior " << prior << " must lie in (0,1)";
    throw ModelError(ErrorKind::kRangeViolation, os.str());
  }
  return Credence(
      mu.given_not_c() + prior * (mu.given_c() - mu.given_not_c()), mu);
}

}  // namespace chatnet
