#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "gcdstat/density.hpp"
#include "oracle.hpp"

using namespace gcdstat;

namespace {

std::vector<double> as_vector(const SeqSample& x) { return {x.values().begin(), x.values().end()}; }

SeqSample identity_sequence(Index length) {
  std::vector<double> v(static_cast<std::size_t>(length));
  for (Index m = 1; m <= length; ++m) v[static_cast<std::size_t>(m - 1)] = static_cast<double>(m);
  return SeqSample(std::move(v));
}

}  // namespace

TEST_CASE("exceedance sets on the dyadic spike example") {
  const auto x = generate(gen::spikes(gen::PowerSupport{2.0, 1}, {10.0}), 1 << 20);
  const auto e = exceedance_prefix(x, WitnessModulus(1), 1.0, 16);
  CHECK(e.members == std::vector<Index>{2, 4, 8, 16});
  CHECK(e.range_size() == 16);
  CHECK(prefix_density(x, WitnessModulus(1), 1.0, 16) == 0.25);
  CHECK(prefix_density(x, WitnessModulus(1), 1.0, 1 << 20) == 20.0 / (1 << 20));

  const auto scheme = geometric_scheme(2.0, 20, 1);
  for (std::size_t r = 1; r <= 20; ++r) {
    CHECK(block_density(x, scheme, WitnessModulus(1), 1.0, r) == std::ldexp(1.0, 1 - static_cast<int>(r)));
  }
  CHECK(block_density(x, scheme, WitnessModulus(1), 11.0, 5) == 0.0);
}

TEST_CASE("constant and gcd-periodic sequences have empty exceedance") {
  const auto c = generate(gen::constant(-2.0), 500);
  const auto p = generate(gen::gcd_periodic(6, gen::divisor_table(6)), 500);
  const auto scheme = geometric_scheme(2.0, 8, 1);
  for (double eps : {1.0, 0.1, 1e-9}) {
    CHECK(exceedance_prefix(c, WitnessModulus(5), eps, 500).members.empty());
    CHECK(exceedance_prefix(p, WitnessModulus(6), eps, 500).members.empty());
    for (std::size_t r = 1; r <= 8; ++r) {
      CHECK(block_density(c, scheme, WitnessModulus(3), eps, r) == 0.0);
      CHECK(block_density(p, scheme, WitnessModulus(6), eps, r) == 0.0);
    }
  }
}

TEST_CASE("densities match the oracle and are monotone in epsilon") {
  std::mt19937_64 eng(11);
  std::uniform_int_distribution<int> val(-24, 24);
  std::vector<double> v(2000);
  for (auto& e : v) e = val(eng) / 8.0;
  const SeqSample x(v);
  const auto scheme = make_scheme({1, 3, 10, 40, 100, 400, 1000, 2000});
  const std::vector<Index> k(scheme.points().begin(), scheme.points().end());
  const std::vector<double> grid{3.0, 1.0, 0.5, 0.125};
  for (Index n : {1, 2, 6, 30}) {
    for (Index t : {1, 7, 100, 1999, 2000}) {
      double previous = -1.0;
      for (double eps : grid) {
        const double d = prefix_density(x, WitnessModulus(n), eps, t);
        CHECK(d == oracle::prefix_density(v, n, eps, t));
        CHECK(d >= previous);
        previous = d;
      }
    }
    for (std::size_t r = 1; r <= scheme.block_count(); ++r) {
      for (double eps : grid) {
        CHECK(block_density(x, scheme, WitnessModulus(n), eps, r) == oracle::block_density(v, k, n, eps, r));
        CHECK(block_exceedance(x, scheme, WitnessModulus(n), eps, r).members ==
              oracle::exceed(v, n, eps, k[r - 1], k[r]));
      }
      CHECK(ac_theta_block_mean(x, scheme, WitnessModulus(n), r) ==
            doctest::Approx(oracle::block_mean_deviation(v, k, n, r)).epsilon(1e-12));
    }
    CHECK(ac_sup_deviation(x, WitnessModulus(n)) == oracle::sup_deviation(v, n));
  }
}

TEST_CASE("range errors") {
  const auto x = generate(gen::constant(1.0), 10);
  const auto scheme = make_scheme({1, 4, 16});
  CHECK_THROWS_AS(block_density(x, scheme, WitnessModulus(1), 1.0, 2), std::out_of_range);
  CHECK_THROWS_AS(block_density(x, scheme, WitnessModulus(1), 1.0, 3), std::out_of_range);
  CHECK_THROWS_AS(prefix_density(x, WitnessModulus(1), 1.0, 11), std::out_of_range);
  CHECK_THROWS_AS(prefix_density(x, WitnessModulus(1), 0.0, 5), std::invalid_argument);
}

TEST_CASE("prefix checkpoints and curves") {
  const auto cps = prefix_checkpoints(100, 1.3);
  CHECK(cps.front() == 1);
  CHECK(std::is_sorted(cps.begin(), cps.end()));
  CHECK(std::adjacent_find(cps.begin(), cps.end()) == cps.end());
  CHECK(cps.back() <= 100);
  for (std::size_t j = 0, i = 0; i < cps.size(); ++j) {
    const auto t = static_cast<Index>(std::floor(std::pow(1.3, static_cast<double>(j))));
    if (t > 100) break;
    if (t == cps[i]) ++i;
    CHECK(std::find(cps.begin(), cps.end(), t) != cps.end());
  }

  const auto x = generate(gen::spikes(gen::PowerSupport{2.0, 1}, {10.0}), 4096);
  const auto curve = density_curve(x, WitnessModulus(1), 1.0);
  CHECK(curve.axis == Axis::Prefix);
  CHECK(curve.points.size() == prefix_checkpoints(4096, kDefaultGrowth).size());
  const auto scheme = geometric_scheme(2.0, 12, 1);
  const auto block_curve = density_curve(x, scheme, WitnessModulus(1), 1.0);
  CHECK(block_curve.axis == Axis::Block);
  REQUIRE(block_curve.points.size() == 12);
  for (std::size_t r = 1; r <= 12; ++r) CHECK(block_curve.points[r - 1].value == std::ldexp(1.0, 1 - static_cast<int>(r)));
}

TEST_CASE("epsilon grid and policy validation") {
  CHECK(EpsilonGrid::standard().values().size() == 5);
  CHECK(EpsilonGrid::standard().largest() == 1.0);
  CHECK(EpsilonGrid::standard().smallest() == 0.01);
  CHECK_THROWS_AS(EpsilonGrid({0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(EpsilonGrid({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(EpsilonGrid({}), std::invalid_argument);
  VerdictPolicy p;
  p.tol = 0.3;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
  p = VerdictPolicy{};
  p.growth = 1.0;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
  p = VerdictPolicy{};
  p.n_max = 0;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
}

TEST_CASE("verdicts") {
  const auto grid = EpsilonGrid::standard();
  const VerdictPolicy policy;

  const auto c = asc_verdict(generate(gen::constant(4.0), 5000), grid, policy);
  CHECK(c.outcome == Outcome::ConvergentAtScale);
  CHECK(c.witness == 1);
  for (const auto& t : c.tail) CHECK(t.density == 0.0);

  const auto x6 = generate(gen::gcd_periodic(6, gen::divisor_table(6)), 5000);
  const auto p = asc_verdict(x6, grid, policy);
  CHECK(p.outcome == Outcome::ConvergentAtScale);
  CHECK(p.witness == 6);
  const auto scheme = geometric_scheme(2.0, 12, 1);
  const auto pt = asc_theta_verdict(x6, scheme, grid, policy);
  CHECK(pt.outcome == Outcome::ConvergentAtScale);
  CHECK(pt.witness == 6);
  const auto pac = ac_theta_verdict(x6, scheme, grid, policy);
  CHECK(pac.outcome == Outcome::ConvergentAtScale);
  CHECK(pac.witness == 6);

  const auto id = identity_sequence(10000);
  const auto idv = asc_verdict(id, EpsilonGrid({1.0}), policy);
  CHECK(idv.outcome == Outcome::NotConvergentAtScale);
  CHECK(!idv.witness.has_value());
  // Brute force: for every candidate n the density at T is close to 1.
  const auto v = as_vector(id);
  for (Index n = 1; n <= 64; ++n) CHECK(oracle::prefix_density(v, n, 1.0, 10000) > 0.99);
  CHECK(asc_verdict(id, grid, policy).outcome == Outcome::NotConvergentAtScale);

  const auto spikes = generate(gen::spikes(gen::PowerSupport{2.0, 1}, {10.0}), 1 << 14);
  const auto sv = asc_theta_verdict(spikes, geometric_scheme(2.0, 14, 1), grid, policy);
  CHECK(sv.outcome == Outcome::ConvergentAtScale);

  CHECK_THROWS_AS(asc_verdict(generate(gen::constant(1.0), 4), grid, policy), std::invalid_argument);
  CHECK_THROWS_AS(asc_theta_verdict(generate(gen::constant(1.0), 64), geometric_scheme(2.0, 12, 1), grid, policy),
                  std::invalid_argument);
}

TEST_CASE("inconclusive when densities sit between the thresholds") {
  // x_m = 1 for m = 3 mod 10. At n = 1 the density is 0.1, strictly between the thresholds,
  // and no n <= 64 brings every tail under tol.
  std::vector<double> v(4000, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if ((i + 1) % 10 == 3) v[i] = 1.0;
  }
  const SeqSample x(v);
  const auto verdict = asc_verdict(x, EpsilonGrid::standard(), VerdictPolicy{});
  CHECK(verdict.outcome == Outcome::Inconclusive);
}

TEST_CASE("statistical and norm quantities") {
  const auto c = generate(gen::constant(2.5), 100);
  CHECK(stat_prefix_density(c, 2.5, 0.1, 100) == 0.0);
  CHECK(stat_prefix_density(c, 3.5, 0.5, 100) == 1.0);
  const auto scheme = make_scheme({1, 2, 4, 8, 16, 32, 64});
  CHECK(ntheta_mean(c, scheme, 2.5, 3) == 0.0);
  CHECK(ntheta_norm(c, scheme) == 2.5);

  std::vector<double> alt(100);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 == 0 ? 1.0 : -1.0;
  CHECK(ntheta_norm(SeqSample(alt), scheme) == 1.0);

  const auto spikes = generate(gen::spikes(gen::PowerSupport{2.0, 1}, {10.0}), 1 << 12);
  CHECK(stat_prefix_density(spikes, 0.0, 1.0, 16) == 0.25);
  const auto dyadic = geometric_scheme(2.0, 12, 1);
  for (std::size_t r = 1; r <= 12; ++r) {
    CHECK(ac_theta_block_mean(spikes, dyadic, WitnessModulus(1), r) ==
          doctest::Approx(10.0 / static_cast<double>(dyadic.length(r))));
  }

  const auto id = identity_sequence(777);
  CHECK(ac_sup_deviation(id, WitnessModulus(1)) == 776.0);
  CHECK(ac_sup_deviation(c, WitnessModulus(9)) == 0.0);
}
