#include "doctest.h"

#include <cmath>
#include <random>

#include "chatnet/oracle.hpp"
#include "chatnet/receiver.hpp"
#include "support/random_instances.hpp"

using namespace chatnet;
using enum ReceiverAction;

namespace {

// Hand evaluation of the utility, kept apart from the library formula.
double by_hand(double a, double theta, double b, double lambda) {
  return -(std::abs(a - theta) + lambda * std::abs(a - b));
}

}  // namespace

TEST_CASE("utility matches direct evaluation") {
  const auto d03 = PeerDistanceProfile::dirac(0.3);
  CHECK(utility(kDisapprove, 0.1, d03, 1.0) == doctest::Approx(-0.4));
  CHECK(utility(kDisapprove, 0.1, d03, 1.0) == doctest::Approx(by_hand(0, 0.1, 0.3, 1)));
  CHECK(utility(kApprove, 1.0, PeerDistanceProfile::dirac(1.0), 7.0) == 0.0);
  CHECK(utility(kApprove, 0.0, PeerDistanceProfile::dirac(0.8), 6.0) ==
        doctest::Approx(-2.2));
}

TEST_CASE("peer_distance") {
  auto d = peer_distance(SecondOrderBelief::dirac({0.8, 0.8}));
  CHECK(d.d0 == doctest::Approx(0.8));
  CHECK(d.d05 == doctest::Approx(0.3));
  CHECK(d.d1 == doctest::Approx(0.2));

  d = peer_distance(SecondOrderBelief::dirac({0.5}));
  CHECK(d.d0 == doctest::Approx(0.5));
  CHECK(d.d05 == doctest::Approx(0.0));
  CHECK(d.d1 == doctest::Approx(0.5));

  d = peer_distance(SecondOrderBelief({{{0.2}, 0.5}, {{0.6}, 0.5}}));
  CHECK(d.d0 == doctest::Approx(0.4));
  CHECK(d.d05 == doctest::Approx(0.2));
  CHECK(d.d1 == doctest::Approx(0.6));

  CHECK_THROWS_AS(SecondOrderBelief(std::vector<BeliefAtom>{}), ModelError);
  CHECK_THROWS_AS(peer_distance(SecondOrderBelief{}), ModelError);
  CHECK_THROWS_AS(SecondOrderBelief({{{0.2}, 0.5}, {{0.6}, 0.4}}), ModelError);
}

TEST_CASE("best_actions on the low-credence regimes") {
  CHECK(best_actions(0.1, PeerDistanceProfile::dirac(0.3), 1.0) == ActionSet{kDisapprove});
  CHECK(best_actions(0.1, PeerDistanceProfile::dirac(1.0), 1.0) ==
        ActionSet{kSilence, kApprove});
  CHECK(best_actions(0.1, PeerDistanceProfile::dirac(0.9), 2.0) == ActionSet{kApprove});
}

TEST_CASE("support_interval closed forms") {
  auto iv = support_interval(kDisapprove, PeerDistanceProfile::dirac(0.3), 1.0);
  CHECK_FALSE(iv.empty);
  CHECK(iv.lo == doctest::Approx(0.0));
  CHECK(iv.hi == doctest::Approx(0.2));

  iv = support_interval(kApprove, PeerDistanceProfile::dirac(0.8), 6.0);
  CHECK(iv.lo == doctest::Approx(0.0));
  CHECK(iv.hi == doctest::Approx(1.0));

  iv = support_interval(kSilence, PeerDistanceProfile::dirac(0.0), 0.0);
  CHECK(iv.lo == doctest::Approx(0.25));
  CHECK(iv.hi == doctest::Approx(0.75));

  // Grid oracle agrees on the first case.
  const auto grid = oracle::oracle_support_set(kDisapprove, PeerDistanceProfile::dirac(0.3), 1.0);
  REQUIRE_FALSE(grid.empty());
  CHECK(grid.front() == doctest::Approx(0.0));
  CHECK(std::abs(grid.back() - 0.2) <= 1e-3);
}

TEST_CASE("interval_ordering_check") {
  auto chain = interval_ordering_check(PeerDistanceProfile::dirac(0.3), 1.0);
  CHECK(chain.holds);
  CHECK(chain.chain.size() == 6);

  chain = interval_ordering_check(PeerDistanceProfile::dirac(0.7), 0.0);
  CHECK(chain.holds);
  const auto& ivs = chain.intervals;
  CHECK(ivs[0].lo == doctest::Approx(0.0));
  CHECK(ivs[0].hi == doctest::Approx(0.25));
  CHECK(ivs[1].lo == doctest::Approx(0.25));
  CHECK(ivs[1].hi == doctest::Approx(0.75));
  CHECK(ivs[2].lo == doctest::Approx(0.75));
  CHECK(ivs[2].hi == doctest::Approx(1.0));

  chain = interval_ordering_check(PeerDistanceProfile::dirac(0.1), 10.0);
  CHECK(chain.holds);
  CHECK(chain.intervals[1].empty);
  CHECK(chain.intervals[2].empty);
  CHECK(chain.intervals[0].lo == doctest::Approx(0.0));
  CHECK(chain.intervals[0].hi == doctest::Approx(1.0));
  for (double theta = 0.0; theta <= 1.0; theta += 0.01) {
    CHECK(oracle::oracle_best_actions(theta, PeerDistanceProfile::dirac(0.1), 10.0) ==
          ActionSet{kDisapprove});
  }
}

TEST_CASE("min_lambda_for_action") {
  const auto d08 = PeerDistanceProfile::dirac(0.8);
  // Binding rival is silence: -1 - 0.2 l = -0.5 - 0.3 l at l = 5.
  const auto need = min_lambda_for_action(0.0, d08, kApprove);
  REQUIRE(need);
  CHECK(*need == doctest::Approx(5.0).epsilon(1e-12));
  const auto bisect = oracle::oracle_min_lambda(0.0, d08, kApprove);
  REQUIRE(bisect);
  CHECK(std::abs(*bisect - *need) <= 1e-6);

  CHECK(*min_lambda_for_action(1.0, d08, kApprove) == 0.0);

  const auto d02 = PeerDistanceProfile::dirac(0.2);
  const auto need0 = min_lambda_for_action(1.0, d02, kDisapprove);
  REQUIRE(need0);
  CHECK(std::isfinite(*need0));
  CHECK(std::abs(*need0 - *oracle::oracle_min_lambda(1.0, d02, kDisapprove)) <= 1e-6);

  // Not the closest action, or no strict minimizer.
  CHECK_FALSE(min_lambda_for_action(0.5, d08, kSilence));
  CHECK_FALSE(min_lambda_for_action(0.5, PeerDistanceProfile::dirac(0.25), kDisapprove));
}

TEST_CASE("lambda_star") {
  CHECK(*lambda_star(PeerDistanceProfile::dirac(0.2)) == doctest::Approx(5.0));
  CHECK(*lambda_star(PeerDistanceProfile::dirac(0.0)) == doctest::Approx(1.0));
  const auto half = lambda_star(PeerDistanceProfile::dirac(0.5));
  REQUIRE(half);

  // Grid oracle: sup over theta of the bisected threshold.
  for (double b : {0.0, 0.2, 0.5, 0.6, 0.9}) {
    const auto d = PeerDistanceProfile::dirac(b);
    const auto target = *d.strict_minimizer();
    double sup = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      sup = std::max(sup, *oracle::oracle_min_lambda(k * 1e-3, d, target, 1e3, 1e-7));
    }
    CHECK(std::abs(sup - *lambda_star(d)) <= 1e-6);
  }
  CHECK_FALSE(lambda_star(PeerDistanceProfile::dirac(0.75)));
}

TEST_CASE("alt_utility versus mean-based utility") {
  const std::vector<double> peers{0.0, 1.0};
  CHECK(alt_utility(kDisapprove, 0.2, peers, 1.0) == doctest::Approx(-0.7));
  CHECK(alt_utility(kSilence, 0.2, peers, 1.0) == doctest::Approx(-0.8));
  CHECK(alt_utility(kApprove, 0.2, peers, 1.0) == doctest::Approx(-1.3));
  const auto d = PeerDistanceProfile::dirac(0.5);
  CHECK(utility(kSilence, 0.2, d, 1.0) == doctest::Approx(-0.3));
  CHECK_THROWS_AS(alt_utility(kSilence, 0.2, std::vector<double>{}, 1.0), ModelError);
}

TEST_CASE("support intervals agree with the grid oracle on random draws") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 1000; ++n) {
    const auto d = testing::random_distance_profile(rng);
    const double lambda = testing::random_lambda(rng);
    for (auto a : kReceiverActions) {
      const auto iv = support_interval(a, d, lambda);
      const auto grid = oracle::oracle_support_set(a, d, lambda);
      if (grid.empty()) {
        // Only a sliver narrower than one grid step may hide from the grid.
        if (!iv.empty) CHECK(iv.hi - iv.lo <= 1e-3);
        continue;
      }
      REQUIRE_FALSE(iv.empty);
      CHECK(std::abs(grid.front() - iv.lo) <= 1e-3 + 1e-9);
      CHECK(std::abs(grid.back() - iv.hi) <= 1e-3 + 1e-9);
    }
  }
}

TEST_CASE("best_actions matches the direct oracle on random draws") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n = 0; n < 10000; ++n) {
    const auto d = testing::random_distance_profile(rng);
    const double lambda = testing::random_lambda(rng);
    const double theta = unit(rng);
    CHECK(best_actions(theta, d, lambda) == oracle::oracle_best_actions(theta, d, lambda));
  }
}
