#include <doctest.h>

#include <cmath>

#include "nornet/error.hpp"
#include "nornet/inference.hpp"
#include "nornet/reduction.hpp"
#include "test_support.hpp"

using namespace nornet;
using namespace nornet::testing;

TEST_CASE("compose_serial") {
  CHECK(compose_serial(0.4, 0.5) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(compose_serial(1.0, 0.37) == 0.37);
  CHECK(compose_serial(0.0, 0.37) == 0.0);
}

TEST_CASE("merge_parallel") {
  const double a[] = {0.2, 0.3};
  CHECK(merge_parallel(a) == doctest::Approx(0.44).epsilon(1e-15));
  const double single[] = {0.123};
  CHECK(merge_parallel(single) == doctest::Approx(0.123).epsilon(1e-15));
  const double certain[] = {1.0, 0.4};
  CHECK(merge_parallel(certain) == 1.0);
  CHECK_THROWS_AS(merge_parallel(std::span<const double>{}), Error);
}

TEST_CASE("absorb_leak") {
  CHECK(absorb_leak(0.1, 0.5, 0.2) == doctest::Approx(0.24).epsilon(1e-15));
  CHECK(absorb_leak(0.0, 0.7, 0.2) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(absorb_leak(0.3, 1.0, 0.0) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("eliminate_ips on a chain composes the edge and absorbs the leak") {
  const Network reduced = eliminate_ips(chain(0.3, 0.4, 0.5, 0.1, 0.2), "B");
  CHECK(reduced.valid());
  CHECK(reduced.size() == 2);
  CHECK(*reduced.eta("A", "C") == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(reduced.node("C").leak == doctest::Approx(0.24).epsilon(1e-15));
}

TEST_CASE("eliminate_ips on the fork yields one edge per path") {
  const std::vector<double> p{0.6, 0.5, 0.4};
  const std::vector<double> q{0.7, 0.8};
  const Network reduced = eliminate_ips(star(p, q, 0.0, {0.0, 0.0}, {0.1, 0.1, 0.1}), "I");
  CHECK(reduced.edges().size() == 6);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      const auto eta = reduced.eta("D" + std::to_string(i + 1), "F" + std::to_string(j + 1));
      REQUIRE(eta);
      CHECK(*eta == doctest::Approx(p[i] * q[j]).epsilon(1e-15));
    }
  }
}

TEST_CASE("diamond merges both paths into one edge") {
  const double p1 = 0.6, q1 = 0.7, p2 = 0.3, q2 = 0.9;
  Network diamond("diamond", {disease("A", 0.2), ips("B1"), ips("B2"), finding("C")},
                  {{"A", "B1", p1}, {"B1", "C", q1}, {"A", "B2", p2}, {"B2", "C", q2}});
  const ReductionReport r = level_reduce(diamond);
  CHECK(r.reduced.edges().size() == 1);
  CHECK(*r.reduced.eta("A", "C") == doctest::Approx(1 - (1 - p1 * q1) * (1 - p2 * q2)).epsilon(1e-15));
  REQUIRE(r.provenance.size() == 1);
  CHECK(r.provenance[0].source_paths.size() == 2);
  CHECK(r.eliminated_ips_order == std::vector<NodeId>{"B1", "B2"});
}

TEST_CASE("eliminate_ips errors and degenerate nodes") {
  const Network net = chain(0.3, 0.4, 0.5, 0.1, 0.2);
  CHECK_THROWS_AS(eliminate_ips(net, "A"), Error);
  CHECK_THROWS_AS(eliminate_ips(net, "nope"), Error);

  // No successors: removed with no leak effect.
  Network dangling("dangling", {disease("A", 0.3), ips("B", 0.4), finding("C", 0.2)},
                   {{"A", "B", 0.5}, {"A", "C", 0.6}});
  const Network r1 = eliminate_ips(dangling, "B");
  CHECK(r1.node("C").leak == 0.2);
  CHECK(r1.edges().size() == 1);

  // No predecessors: the successor absorbs the IPS leak through q.
  Network orphan("orphan", {disease("A", 0.3), ips("B", 0.4), finding("C", 0.2)},
                 {{"B", "C", 0.5}, {"A", "C", 0.6}});
  const Network r2 = eliminate_ips(orphan, "B");
  CHECK(r2.node("C").leak == doctest::Approx(1 - (1 - 0.4 * 0.5) * 0.8));
  CHECK(r2.valid());
}

TEST_CASE("level_reduce on a two-level network is a fixed point") {
  Network net("two", {disease("D1", 0.1), disease("D2", 0.2), finding("F1", 0.01), finding("F2", 0.02, 3)},
              {{"D1", "F1", 0.4}, {"D2", "F1", 0.5}, {"D2", "F2", 0.9}});
  const ReductionReport r = level_reduce(net);
  CHECK(r.reduced == net);
  CHECK(r.eliminated_ips_order.empty());
  CHECK(r.param_count_original == r.param_count_reduced);
}

TEST_CASE("star parameter counts are m+n and m*n") {
  const ReductionReport r = level_reduce(star({0.5, 0.6, 0.7}, {0.8, 0.9}, 0.0, {0.0, 0.0}, {0.1, 0.1, 0.1}));
  CHECK(r.param_count_original == 5);
  CHECK(r.param_count_reduced == 6);
}

TEST_CASE("IPS chain collapses to the product of etas") {
  const double p = 0.7, r = 0.6, q = 0.5;
  Network net("ipschain", {disease("A", 0.4), ips("B1"), ips("B2"), finding("C")},
              {{"A", "B1", p}, {"B1", "B2", r}, {"B2", "C", q}});
  const ReductionReport rep = level_reduce(net);
  CHECK(*rep.reduced.eta("A", "C") == doctest::Approx(p * r * q).epsilon(1e-15));
  REQUIRE(rep.provenance.size() == 1);
  CHECK(rep.provenance[0].source_paths[0] == std::vector<NodeId>{"A", "B1", "B2", "C"});
  // Leak-free chain: reduced posterior equals the brute-force original.
  for (bool c : {true, false}) {
    const Assignment ev{{"C", c}};
    CHECK(posterior(rep.reduced, ev).posterior.at("A") ==
          doctest::Approx(oracle_posterior(net, ev, "A")).epsilon(1e-12));
  }
}

TEST_CASE("level_reduce rejects invalid networks") {
  Network bad("bad", {disease("D", 0.1), finding("F")}, {{"F", "D", 0.5}});
  try {
    level_reduce(bad);
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.error_class() == ErrorClass::Validation);
  }
}

TEST_CASE("reduction properties on random networks") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Network net = random_small_network(seed);
    REQUIRE(net.valid());
    const ReductionReport r = level_reduce(net);
    CAPTURE(seed);
    CHECK(r.reduced.valid());
    CHECK(r.reduced.count(NodeKind::IPS) == 0);
    CHECK(r.param_count_original == parameter_count(net));
    CHECK(r.param_count_reduced == parameter_count(r.reduced));
    // Idempotence.
    CHECK(level_reduce(r.reduced).reduced == r.reduced);
    // Preservation of diseases, findings, priors and phases.
    for (const Node& n : net.nodes()) {
      if (n.kind == NodeKind::IPS) continue;
      const Node& m = r.reduced.node(n.id);
      CHECK(m.kind == n.kind);
      CHECK(m.prior == n.prior);
      CHECK(m.phase == n.phase);
      CHECK(m.leak >= n.leak);
    }
    // Provenance paths run from src to dst and pair one eta with each path.
    for (const PathProvenance& p : r.provenance) {
      CHECK(p.source_paths.size() == p.composed_etas.size());
      CHECK(r.reduced.eta(p.src, p.dst).has_value());
      for (const auto& path : p.source_paths) {
        CHECK(path.front() == p.src);
        CHECK(path.back() == p.dst);
      }
    }
    CHECK(r.provenance.size() == r.reduced.edges().size());
  }
}

TEST_CASE("leak mapping is exact when the disease is absent") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Network net = chain(0.3, rng.uniform_real(0.01, 1.0), rng.uniform_real(0.01, 1.0), rng.uniform(),
                              rng.uniform());
    const Network reduced = level_reduce(net).reduced;
    const Assignment a{{"A", false}, {"C", true}};
    const double original = probability_of(net, a) / 0.7;
    const double mapped = probability_of(reduced, a) / 0.7;
    CHECK(mapped == doctest::Approx(original).epsilon(1e-12));
  }
}

TEST_CASE("fan-in bias: two-level likelihood overestimates") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = static_cast<std::size_t>(rng.uniform_int(2, 4));
    std::vector<double> p(m), priors(m, 0.5);
    for (double& x : p) x = rng.uniform_real(0.05, 1.0);
    const double q = rng.uniform_real(0.05, 0.95);
    const Network net = star(p, {q}, 0.0, {0.0}, priors);
    const Network reduced = level_reduce(net).reduced;
    Assignment all_present{{"F1", true}};
    for (std::size_t i = 0; i < m; ++i) all_present["D" + std::to_string(i + 1)] = true;
    CHECK(probability_of(reduced, all_present) > probability_of(net, all_present));
  }
}

TEST_CASE("fan-out bias: two-level likelihood underestimates by p^(n-1)") {
  SplitMix64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 4));
    const double p = rng.uniform_real(0.05, 1.0);
    std::vector<double> q(n);
    for (double& x : q) x = rng.uniform_real(0.05, 1.0);
    const Network net = star({p}, q, 0.0, std::vector<double>(n, 0.0), {0.4});
    const Network reduced = level_reduce(net).reduced;
    Assignment a{{"D1", true}};
    for (std::size_t j = 0; j < n; ++j) a["F" + std::to_string(j + 1)] = true;
    const double original = probability_of(net, a);
    const double two = probability_of(reduced, a);
    CHECK(two <= original);
    CHECK(original / two == doctest::Approx(1.0 / std::pow(p, double(n - 1))).epsilon(1e-12));
  }
}
