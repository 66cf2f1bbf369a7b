#pragma once

// Credence in the message and the worldview it induces under a fixed
// evidence relation. A belief is fully determined by the scalar credence,
// so no measure space is modelled.

namespace chatnet {

// The likelihood pair shared by all agents: probability of the message
// given the hypothesis and given its complement.
class EvidenceRelation {
 public:
  // Throws ModelError (kRangeViolation / kOrderingViolation).
  EvidenceRelation(double mu_given_c, double mu_given_not_c);

  double given_c() const noexcept { return given_c_; }
  double given_not_c() const noexcept { return given_not_c_; }

  // True iff value lies strictly inside (given_not_c, given_c) by more
  // than the tolerance.
  bool admits(double credence) const noexcept;

  friend bool operator==(const EvidenceRelation&,
                         const EvidenceRelation&) = default;

 private:
  double given_c_;
  double given_not_c_;
};

EvidenceRelation validate_evidence(double mu_given_c, double mu_given_not_c);

// A credence in the message that satisfies the open-interval condition for
// the relation it was built against.
class Credence {
 public:
  Credence(double value, const EvidenceRelation& mu);

  double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }

 private:
  double value_;
};

struct Worldview {
  double prior;
  double posterior;
};

double worldview_prior(double credence, const EvidenceRelation& mu);
double worldview_posterior(double credence, const EvidenceRelation& mu);
Worldview worldview(double credence, const EvidenceRelation& mu);

// Inverse of worldview_prior.
Credence credence_from_prior(double prior, const EvidenceRelation& mu);

}  // namespace chatnet
