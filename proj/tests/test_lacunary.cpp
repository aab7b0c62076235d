#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "gcdstat/density.hpp"
#include "gcdstat/lacunary.hpp"
#include "oracle.hpp"

using namespace gcdstat;

namespace {

std::vector<Index> pts(const LacunaryScheme& s) { return {s.points().begin(), s.points().end()}; }

bool fraction_is(const Fraction& f, Index num, Index den) { return f == Fraction{num, den}; }

}  // namespace

TEST_CASE("scheme construction and quantities") {
  const auto s = make_scheme({1, 2, 4, 8, 16});
  CHECK(s.block_count() == 4);
  CHECK(s.lengths() == std::vector<Index>{1, 2, 4, 8});
  CHECK(s.ratios() == std::vector<double>{2, 2, 2, 2});
  CHECK(s.block(3) == Block{4, 8});
  CHECK(s.block(3).contains(5));
  CHECK(!s.block(3).contains(4));
  CHECK(!s.lacunarity_advisory());
  CHECK(s.block_containing(5) == 3u);
  CHECK(!s.block_containing(1).has_value());
  CHECK(!s.block_containing(17).has_value());
  CHECK(s.blocks_within(10) == 3);
  CHECK(s.blocks_within(1) == 0);

  CHECK(make_scheme({1, 2, 3, 4}).lacunarity_advisory());
  CHECK(make_scheme({1, 2, 6, 24, 120}).ratios() == std::vector<double>{2, 3, 4, 5});

  CHECK_THROWS_AS(make_scheme({0, 2, 4}), std::invalid_argument);
  CHECK_THROWS_AS(make_scheme({1, 3, 3}), std::invalid_argument);
  CHECK_THROWS_AS(make_scheme({5}), std::invalid_argument);
  CHECK_THROWS_AS(s.block(0), std::out_of_range);
  CHECK_THROWS_AS(s.block(5), std::out_of_range);
}

TEST_CASE("scheme generators") {
  CHECK(pts(geometric_scheme(2.0, 4, 1)) == std::vector<Index>{1, 2, 4, 8, 16});
  CHECK(pts(geometric_scheme(3.0, 3, 2)) == std::vector<Index>{2, 6, 18, 54});
  CHECK(pts(polynomial_scheme(2, 3)) == std::vector<Index>{1, 4, 9, 16});
  CHECK(pts(factorial_scheme(4)) == std::vector<Index>{1, 2, 6, 24, 120});
  CHECK_THROWS_AS(geometric_scheme(1.0, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(geometric_scheme(1.1, 4, 1), std::invalid_argument);  // floor collapses points
}

TEST_CASE("block tiling") {
  for (const auto& s : {geometric_scheme(2.0, 10, 3), polynomial_scheme(3, 12), factorial_scheme(8)}) {
    const auto h = s.lengths();
    CHECK(std::accumulate(h.begin(), h.end(), Index{0}) == s.last() - s.first());
    for (Index m = s.first() + 1; m <= s.last(); m += 7) {
      const auto r = s.block_containing(m);
      REQUIRE(r.has_value());
      CHECK(s.block(*r).contains(m));
    }
  }
}

TEST_CASE("ratio statistics") {
  const auto g = q_ratio_stats(geometric_scheme(2.0, 10, 1));
  CHECK(g.liminf == 2.0);
  CHECK(g.limsup == 2.0);
  CHECK(g.tail_blocks == 5);

  // k_r = r^2 for r = 1..100: 99 blocks, the trailing 49 have ratios (r/(r-1))^2, r = 52..100.
  const auto sq = polynomial_scheme(2, 99);
  const auto st = q_ratio_stats(sq, 0.5);
  CHECK(st.liminf < 1.05);
  CHECK(st.liminf > 1.0);
  CHECK(st.liminf == doctest::Approx(10000.0 / 9801.0));
  CHECK(st.tail_blocks == 49);
  CHECK(st.limsup == doctest::Approx(2704.0 / 2601.0));

  const auto f = factorial_scheme(12);
  CHECK(q_ratio_stats(f).limsup == f.ratios().back());

  CHECK_THROWS_AS(q_ratio_stats(make_scheme({1, 2})), std::invalid_argument);
  CHECK_THROWS_AS(q_ratio_stats(geometric_scheme(2.0, 4, 1), 0.0), std::invalid_argument);
}

TEST_CASE("refinement and union") {
  const auto coarse = make_scheme({1, 4, 16});
  CHECK(is_refinement(coarse, make_scheme({1, 2, 4, 8, 16})));
  CHECK(!is_refinement(coarse, make_scheme({1, 3, 9, 27})));
  CHECK(is_refinement(coarse, coarse));

  CHECK(pts(union_refinement(coarse, make_scheme({1, 2, 8, 16}))) == std::vector<Index>{1, 2, 4, 8, 16});
  CHECK(union_refinement(coarse, coarse) == coarse);
  CHECK(pts(union_refinement(make_scheme({2, 6, 18}), make_scheme({1, 6, 36}))) ==
        std::vector<Index>{1, 2, 6, 18, 36});
}

TEST_CASE("refinement map") {
  const auto rel = refinement_map(make_scheme({1, 4, 16}), make_scheme({1, 2, 4, 8, 16}));
  CHECK(rel.kind == RelationKind::Refinement);
  REQUIRE(rel.pairings.size() == 4);
  CHECK(rel.within(1).size() == 2);
  CHECK(rel.within(2).size() == 2);
  CHECK(fraction_is(rel.delta, 1, 3));

  const auto self = refinement_map(make_scheme({1, 4, 16}), make_scheme({1, 4, 16}));
  CHECK(self.delta == Fraction{1, 1});
  CHECK(self.pairings.size() == 2);

  const auto r2 = refinement_map(make_scheme({1, 8}), make_scheme({1, 2, 3, 8}));
  REQUIRE(r2.pairings.size() == 3);
  CHECK(r2.pairings[0].ratio == Fraction{1, 7});
  CHECK(r2.pairings[1].ratio == Fraction{1, 7});
  CHECK(r2.pairings[2].ratio == Fraction{5, 7});
  CHECK(r2.delta == Fraction{1, 7});

  CHECK_THROWS_AS(refinement_map(make_scheme({1, 4, 16}), make_scheme({1, 3, 9, 27})), std::invalid_argument);
}

TEST_CASE("block intersections") {
  const auto rel = block_intersections(make_scheme({1, 4, 16}), make_scheme({1, 8, 16}));
  CHECK(rel.kind == RelationKind::GeneralPair);
  REQUIRE(rel.pairings.size() == 3);
  CHECK(rel.pairings[0].overlap == Block{1, 4});
  CHECK(rel.pairings[0].ratio == Fraction{1, 1});
  CHECK(rel.pairings[1].overlap == Block{4, 8});
  CHECK(rel.pairings[1].ratio == Fraction{4, 12});
  CHECK(rel.pairings[2].overlap == Block{8, 16});
  CHECK(rel.pairings[2].ratio == Fraction{8, 12});
  CHECK(rel.delta == Fraction{1, 3});

  const auto a = geometric_scheme(3.0, 5, 1);
  const auto same = block_intersections(a, a);
  CHECK(same.delta == Fraction{1, 1});
  CHECK(same.pairings.size() == a.block_count());
}

TEST_CASE("relations agree with the oracle on random schemes") {
  std::mt19937_64 eng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Index> a{1 + static_cast<Index>(eng() % 5)};
    for (int i = 0; i < 6; ++i) a.push_back(a.back() + 1 + static_cast<Index>(eng() % 40));
    std::vector<Index> fine;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
      fine.push_back(a[i]);
      for (Index m = a[i] + 1; m < a[i + 1]; ++m) {
        if (eng() % 4 == 0) fine.push_back(m);
      }
    }
    fine.push_back(a.back());
    const auto coarse_s = make_scheme(a);
    const auto fine_s = make_scheme(fine);
    const auto rel = refinement_map(coarse_s, fine_s);
    const auto [num, den] = oracle::refinement_delta(a, fine);
    CHECK(rel.delta == Fraction{num, den});

    std::vector<Index> b{1 + static_cast<Index>(eng() % 5)};
    for (int i = 0; i < 5; ++i) b.push_back(b.back() + 1 + static_cast<Index>(eng() % 60));
    const auto inter = block_intersections(coarse_s, make_scheme(b));
    const auto [inum, iden] = oracle::intersection_delta(a, b);
    CHECK(inter.delta == Fraction{inum, iden});
  }
}

TEST_CASE("coarse density from fine blocks") {
  const auto x = generate(gen::spikes(gen::PowerSupport{2.0, 1}, {10.0}), 1 << 12);
  const auto coarse = geometric_scheme(4.0, 6, 1);
  const auto fine = geometric_scheme(2.0, 12, 1);
  for (std::size_t r = 1; r <= 6; ++r) {
    const double direct = block_density(x, coarse, WitnessModulus(1), 1.0, r);
    CHECK(coarse_block_density_from_fine(x, coarse, fine, WitnessModulus(1), 1.0, r) ==
          doctest::Approx(direct).epsilon(1e-12));
    CHECK(direct == doctest::Approx(2.0 / static_cast<double>(coarse.length(r))));
  }
  const auto c = generate(gen::constant(1.0), 100);
  CHECK(coarse_block_density_from_fine(c, make_scheme({1, 10, 100}), make_scheme({1, 5, 10, 50, 100}),
                                       WitnessModulus(1), 0.5, 2) == 0.0);
  CHECK_THROWS_AS(coarse_block_density_from_fine(c, make_scheme({1, 10, 100}), make_scheme({1, 5, 100}),
                                                 WitnessModulus(1), 0.5, 1),
                  std::invalid_argument);
}

TEST_CASE("fraction ordering is exact") {
  CHECK(Fraction{1, 3} < Fraction{2, 5});
  CHECK(Fraction{2, 6} == Fraction{1, 3});
  const Index big = Index{1} << 40;
  CHECK(Fraction{big + 1, big} < Fraction{big, big - 1});
  CHECK(Fraction{3 * big, 3 * big + 3} == Fraction{big, big + 1});
}
