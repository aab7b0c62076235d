#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gcdstat/kernel.hpp"

namespace gcdstat {

// Half-open integer interval (lower, upper]; holds upper - lower integers.
struct Block {
  Index lower = 0;
  Index upper = 0;

  Index size() const noexcept { return upper - lower; }
  bool contains(Index m) const noexcept { return lower < m && m <= upper; }

  friend bool operator==(const Block&, const Block&) = default;
};

// Exact nonnegative ratio of integer counts.
struct Fraction {
  Index num = 0;
  Index den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

  friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) noexcept {
    const __int128 lhs = static_cast<__int128>(a.num) * b.den;
    const __int128 rhs = static_cast<__int128>(b.num) * a.den;
    return lhs <=> rhs;
  }
  friend bool operator==(const Fraction& a, const Fraction& b) noexcept {
    return (a <=> b) == std::strong_ordering::equal;
  }
};

// Strictly increasing k_0 < k_1 < ... < k_R with k_0 >= 1 and R >= 1.
// Block r (1-based) is (k_{r-1}, k_r] of length h_r; q_r = k_r / k_{r-1}.
class LacunaryScheme {
 public:
  // Throws std::invalid_argument on fewer than two points, k_0 < 1, or non-increasing points.
  explicit LacunaryScheme(std::vector<Index> points);

  std::span<const Index> points() const noexcept { return points_; }
  std::size_t block_count() const noexcept { return points_.size() - 1; }
  Index point(std::size_t r) const;
  Index first() const noexcept { return points_.front(); }
  Index last() const noexcept { return points_.back(); }

  Block block(std::size_t r) const;
  Index length(std::size_t r) const;
  double ratio(std::size_t r) const;

  std::vector<Index> lengths() const;
  std::vector<double> ratios() const;

  // Set when the mean block length over the last quarter of blocks does not exceed
  // the mean over the first quarter: the prefix shows no sign of h_r growing.
  bool lacunarity_advisory() const noexcept { return advisory_; }

  // Number of leading blocks with k_r <= length, i.e. that lie inside a sample of that length.
  std::size_t blocks_within(Index length) const noexcept;

  std::optional<std::size_t> block_containing(Index m) const noexcept;

  friend bool operator==(const LacunaryScheme& a, const LacunaryScheme& b) { return a.points_ == b.points_; }

 private:
  void check_block(std::size_t r) const;

  std::vector<Index> points_;
  bool advisory_ = false;
};

LacunaryScheme make_scheme(std::vector<Index> points);

// k_r = floor(start * ratio^r), r = 0..count.
LacunaryScheme geometric_scheme(double ratio, std::size_t count, Index start = 1);
// k_r = (r + 1)^degree, r = 0..count.
LacunaryScheme polynomial_scheme(int degree, std::size_t count);
// k_r = (r + 1)!, r = 0..count.
LacunaryScheme factorial_scheme(std::size_t count);

struct RatioStats {
  double liminf = 0.0;
  double limsup = 0.0;
  std::size_t tail_blocks = 0;
};

// Min and max of q_r over the trailing floor(tail_fraction * R) blocks.
RatioStats q_ratio_stats(const LacunaryScheme& scheme, double tail_fraction = 0.5);

bool is_refinement(const LacunaryScheme& coarse, const LacunaryScheme& fine);

LacunaryScheme union_refinement(const LacunaryScheme& a, const LacunaryScheme& b);

enum class RelationKind { Refinement, GeneralPair };

struct BlockPairing {
  std::size_t coarse_block = 0;
  std::size_t fine_block = 0;
  Block overlap;
  Fraction ratio;  // |overlap| / |coarse block|
};

struct SchemeRelation {
  RelationKind kind = RelationKind::Refinement;
  std::vector<BlockPairing> pairings;  // ordered by coarse block, then fine block
  Fraction delta;

  std::vector<BlockPairing> within(std::size_t coarse_block) const;
};

// Fine blocks contained in each coarse block. Throws std::invalid_argument unless
// is_refinement(coarse, fine).
SchemeRelation refinement_map(const LacunaryScheme& coarse, const LacunaryScheme& fine);

// All nonempty I_i ∩ J_j with ratios relative to the blocks of a.
SchemeRelation block_intersections(const LacunaryScheme& a, const LacunaryScheme& b);

// (1/h_r) * sum over fine blocks J in I_r of |J| * (fine block density of J).
double coarse_block_density_from_fine(const SeqSample& x, const LacunaryScheme& coarse,
                                      const LacunaryScheme& fine, WitnessModulus n, double eps,
                                      std::size_t r);

}  // namespace gcdstat
