#include "doctest.h"

#include <cmath>

#include "chatnet/sender.hpp"
#include "support/random_instances.hpp"

using namespace chatnet;

namespace {

const EvidenceRelation kTiny(0.02, 0.01);

// Sender with prior 0.7 facing receivers with priors 0.9 and 0.2.
SenderContext example_context(int replicas_of_believer = 1) {
  SenderContext ctx{0.7, {}, kTiny, 1, 0};
  for (int k = 0; k < replicas_of_believer; ++k) ctx.receiver_credences.push_back(0.019);
  ctx.receiver_credences.push_back(0.012);
  return ctx;
}

}  // namespace

TEST_CASE("similarity_status_quo") {
  CHECK(similarity_status_quo(example_context()) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(similarity_status_quo(example_context(3)) == doctest::Approx(1.1).epsilon(1e-12));
  SenderContext same{0.5, {0.5, 0.5}, EvidenceRelation(0.9, 0.1), 1, 0};
  CHECK(similarity_status_quo(same) == doctest::Approx(0.0));
}

TEST_CASE("send_gain") {
  CHECK(send_gain(example_context()) == doctest::Approx(0.7 - 35.0 / 57.0).epsilon(1e-12));
  CHECK(send_gain(example_context()) > 0.0);
  CHECK(send_gain(example_context(3)) < 0.0);

  // Receiver whose posterior lands exactly on the sender's prior.
  const EvidenceRelation mu(0.9, 0.1);
  const double theta = 0.5;
  SenderContext ctx{worldview_posterior(theta, mu), {theta}, mu, 1, 0};
  CHECK(send_gain(ctx) ==
        doctest::Approx(std::abs(worldview_prior(theta, mu) - ctx.own_prior)));
}

TEST_CASE("send_payoff applies the disapproval gate") {
  auto ctx = example_context();
  CHECK(send_payoff(ctx) == doctest::Approx(0.7 - 35.0 / 57.0));
  ctx.disapproval_count = 1;
  CHECK(send_payoff(ctx) == 0.0);
  ctx.disapproval_count = 4;
  CHECK(send_payoff(ctx) == 0.0);
  ctx.ell = 2;
  ctx.disapproval_count = 0;
  CHECK(send_payoff(ctx) == doctest::Approx(2.0 * send_gain(ctx)));
}

TEST_CASE("decide_send") {
  const auto own = TypeSet::singleton(credence_from_prior(0.7, kTiny), kTiny);
  const auto two = SecondOrderBelief::dirac({0.019, 0.012});
  CHECK(decide_send(own, two, kTiny, SendGate{1, 0, false}) == SenderAction::kSend);
  CHECK(decide_send(own, two, kTiny, SendGate::root()) == SenderAction::kSend);
  CHECK(decide_send(own, two, kTiny, SendGate{1, 1, false}) == SenderAction::kNoSend);
  CHECK(decide_send(own, two, kTiny, SendGate{3, 5, false}) == SenderAction::kNoSend);
  const auto four = SecondOrderBelief::dirac({0.019, 0.019, 0.019, 0.012});
  CHECK(decide_send(own, four, kTiny, SendGate::root()) == SenderAction::kNoSend);

  // Zero gain: prior 0.5 and posterior 0.9 sit symmetrically around 0.7.
  const EvidenceRelation mu(0.9, 0.1);
  const auto mid = TypeSet::singleton(credence_from_prior(0.7, mu), mu);
  const auto half = SecondOrderBelief::dirac({0.5});
  CHECK(std::abs(expected_send_gain(0.7, half, mu)) < 1e-12);
  CHECK(decide_send(mid, half, mu, SendGate::root()) == SenderAction::kNoSend);
}

TEST_CASE("decide_send on interval types checks the whole interval") {
  const EvidenceRelation mu(0.9, 0.1);
  const auto belief = SecondOrderBelief::dirac({0.5});
  // Gain as a function of the prior tau for one receiver with prior 0.5 and
  // posterior 0.9: positive for tau > 0.7.
  auto types_for = [&](double tau_lo, double tau_hi) {
    return TypeSet::interval(credence_from_prior(tau_lo, mu),
                             credence_from_prior(tau_hi, mu), mu);
  };
  CHECK(decide_send(types_for(0.75, 0.95), belief, mu, SendGate::root()) ==
        SenderAction::kSend);
  CHECK(decide_send(types_for(0.65, 0.95), belief, mu, SendGate::root()) ==
        SenderAction::kNoSend);
  // Gain only grows with the sender's prior, so the low end decides.
  testing::Rng rng(41);
  for (int n = 0; n < 2000; ++n) {
    std::vector<double> profile(static_cast<std::size_t>(testing::uniform_int(rng, 1, 4)));
    for (auto& x : profile) x = testing::random_credence(rng, mu);
    const auto b = SecondOrderBelief::dirac(profile);
    const double t1 = testing::uniform(rng, 0.01, 0.99);
    const double t2 = testing::uniform(rng, t1, 0.99);
    CHECK(expected_send_gain(t1, b, mu) <= expected_send_gain(t2, b, mu) + 1e-12);
  }
}

TEST_CASE("nu_value") {
  const EvidenceRelation mu(0.9, 0.1);
  CHECK(nu_value(0.5, 0.5, mu) == doctest::Approx(-0.4));
  CHECK(std::abs(nu_value(0.1 + 1e-8, 0.5, mu)) < 1e-6);
  CHECK(nu_value(0.012, 0.9, kTiny) == doctest::Approx(0.7 - 17.0 / 30.0).epsilon(1e-12));
  CHECK_THROWS_AS(nu_value(0.95, 0.5, mu), ModelError);
}

TEST_CASE("nu_breakpoints") {
  const EvidenceRelation mu(0.9, 0.1);
  auto bp = nu_breakpoints(0.5, mu);
  CHECK(bp.lo == doctest::Approx(0.18));
  CHECK(bp.hi == doctest::Approx(0.5));
  bp = nu_breakpoints(1e-12, mu);
  CHECK(bp.lo == doctest::Approx(0.1));
  CHECK(bp.hi == doctest::Approx(0.3));
  testing::Rng rng(3);
  for (int n = 0; n < 1000; ++n) {
    const auto m = testing::random_evidence(rng);
    const double tau = testing::uniform(rng, 0.001, 0.999);
    const auto b = nu_breakpoints(tau, m);
    const double g = std::sqrt(m.given_c() * m.given_not_c());
    CHECK(b.lo <= g + 1e-15);
    CHECK(g <= b.hi + 1e-15);
    CHECK(b.lo > m.given_not_c());
    CHECK(b.hi < m.given_c());
  }
}

TEST_CASE("nu shape: up, down, up") {
  testing::Rng rng(17);
  for (int n = 0; n < 200; ++n) {
    const auto mu = testing::random_evidence(rng);
    const double tau = testing::uniform(rng, 0.01, 0.99);
    const auto bp = nu_breakpoints(tau, mu);
    const double step = 1e-4;
    for (double x = mu.given_not_c() + step; x + step < mu.given_c(); x += step) {
      const double diff = nu_value(x + step, tau, mu) - nu_value(x, tau, mu);
      if (x + step <= bp.lo) {
        CHECK(diff >= -1e-12);
      } else if (x >= bp.lo && x + step <= bp.hi) {
        CHECK(diff <= 1e-12);
      } else if (x >= bp.hi) {
        CHECK(diff >= -1e-12);
      }
    }
  }
}

TEST_CASE("gain decomposes into per-receiver nu and the gate clamps") {
  testing::Rng rng(23);
  for (int n = 0; n < 10000; ++n) {
    const auto mu = testing::random_evidence(rng);
    SenderContext ctx{testing::uniform(rng, 0.01, 0.99), {}, mu,
                      testing::uniform_int(rng, 0, 4), testing::uniform_int(rng, 0, 4)};
    const int m = testing::uniform_int(rng, 1, 5);
    double nu_sum = 0.0;
    for (int k = 0; k < m; ++k) {
      ctx.receiver_credences.push_back(testing::random_credence(rng, mu));
      nu_sum += nu_value(ctx.receiver_credences.back(), ctx.own_prior, mu);
    }
    CHECK(std::abs(send_gain(ctx) - nu_sum) <= 1e-12);
    if (ctx.disapproval_count >= ctx.ell) CHECK(send_payoff(ctx) == 0.0);
    if (ctx.ell > ctx.disapproval_count && send_gain(ctx) > 0) {
      auto more = ctx;
      ++more.ell;
      CHECK(send_payoff(more) > send_payoff(ctx));
    }
  }
}

TEST_CASE("a flip from send to no-send moves the credence against nu") {
  testing::Rng rng(29);
  int flips = 0;
  for (int n = 0; n < 20000; ++n) {
    const auto mu = testing::random_evidence(rng);
    const double tau = testing::uniform(rng, 0.01, 0.99);
    const auto own = TypeSet::singleton(credence_from_prior(tau, mu), mu);
    std::vector<double> profile;
    const int m = testing::uniform_int(rng, 1, 4);
    for (int k = 0; k < m; ++k) profile.push_back(testing::random_credence(rng, mu));
    auto moved = profile;
    moved[0] = testing::random_credence(rng, mu);
    const auto before = decide_send(own, SecondOrderBelief::dirac(profile), mu, SendGate::root());
    const auto after = decide_send(own, SecondOrderBelief::dirac(moved), mu, SendGate::root());
    if (before != SenderAction::kSend || after != SenderAction::kNoSend) continue;
    ++flips;
    const double old_x = profile[0], new_x = moved[0];
    CHECK(nu_value(new_x, tau, mu) < nu_value(old_x, tau, mu));
    const auto bp = nu_breakpoints(tau, mu);
    const bool both_low = old_x < bp.lo && new_x < bp.lo;
    const bool both_high = old_x > bp.hi && new_x > bp.hi;
    const bool both_mid = old_x > bp.lo && old_x < bp.hi && new_x > bp.lo && new_x < bp.hi;
    if (both_low || both_high) CHECK(new_x < old_x);
    if (both_mid) CHECK(new_x > old_x);
  }
  CHECK(flips > 100);
}
