#include "gcdstat/lacunary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gcdstat/density.hpp"

namespace gcdstat {

LacunaryScheme::LacunaryScheme(std::vector<Index> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw std::invalid_argument("a lacunary scheme needs at least two points");
  }
  if (points_.front() < 1) {
    throw std::invalid_argument("scheme origin k_0 must be >= 1, got " + std::to_string(points_.front()));
  }
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i] <= points_[i - 1]) {
      throw std::invalid_argument("scheme points must be strictly increasing (k_" + std::to_string(i) + " = " +
                                  std::to_string(points_[i]) + " <= " + std::to_string(points_[i - 1]) + ")");
    }
  }
  const std::size_t blocks = block_count();
  const std::size_t quarter = std::max<std::size_t>(1, blocks / 4);
  double head = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < quarter; ++i) {
    head += static_cast<double>(length(1 + i));
    tail += static_cast<double>(length(blocks - i));
  }
  advisory_ = tail <= head;
}

void LacunaryScheme::check_block(std::size_t r) const {
  if (r < 1 || r > block_count()) {
    throw std::out_of_range("block " + std::to_string(r) + " outside 1.." + std::to_string(block_count()));
  }
}

Index LacunaryScheme::point(std::size_t r) const {
  if (r >= points_.size()) {
    throw std::out_of_range("scheme point " + std::to_string(r) + " does not exist");
  }
  return points_[r];
}

Block LacunaryScheme::block(std::size_t r) const {
  check_block(r);
  return Block{points_[r - 1], points_[r]};
}

Index LacunaryScheme::length(std::size_t r) const {
  check_block(r);
  return points_[r] - points_[r - 1];
}

double LacunaryScheme::ratio(std::size_t r) const {
  check_block(r);
  return static_cast<double>(points_[r]) / static_cast<double>(points_[r - 1]);
}

std::vector<Index> LacunaryScheme::lengths() const {
  std::vector<Index> h;
  for (std::size_t r = 1; r <= block_count(); ++r) h.push_back(length(r));
  return h;
}

std::vector<double> LacunaryScheme::ratios() const {
  std::vector<double> q;
  for (std::size_t r = 1; r <= block_count(); ++r) q.push_back(ratio(r));
  return q;
}

std::size_t LacunaryScheme::blocks_within(Index length) const noexcept {
  const auto end = std::upper_bound(points_.begin() + 1, points_.end(), length);
  return static_cast<std::size_t>(end - (points_.begin() + 1));
}

std::optional<std::size_t> LacunaryScheme::block_containing(Index m) const noexcept {
  if (m <= points_.front() || m > points_.back()) return std::nullopt;
  const auto it = std::lower_bound(points_.begin(), points_.end(), m);
  return static_cast<std::size_t>(it - points_.begin());
}

LacunaryScheme make_scheme(std::vector<Index> points) { return LacunaryScheme(std::move(points)); }

LacunaryScheme geometric_scheme(double ratio, std::size_t count, Index start) {
  if (!(ratio > 1.0) || !std::isfinite(ratio)) {
    throw std::invalid_argument("geometric scheme ratio must exceed 1");
  }
  if (start < 1) throw std::invalid_argument("geometric scheme start must be >= 1");
  std::vector<Index> points{start};
  const bool integral = ratio == std::floor(ratio);
  for (std::size_t r = 1; r <= count; ++r) {
    Index next = 0;
    if (integral) {
      const auto factor = static_cast<Index>(ratio);
      if (points.back() > std::numeric_limits<Index>::max() / factor) {
        throw std::invalid_argument("geometric scheme overflows 64-bit points");
      }
      next = points.back() * factor;
    } else {
      const double v = std::floor(static_cast<double>(start) * std::pow(ratio, static_cast<double>(r)));
      if (v >= 9.0e18) throw std::invalid_argument("geometric scheme overflows 64-bit points");
      next = static_cast<Index>(v);
    }
    points.push_back(next);
  }
  return LacunaryScheme(std::move(points));
}

LacunaryScheme polynomial_scheme(int degree, std::size_t count) {
  if (degree < 1) throw std::invalid_argument("polynomial scheme degree must be >= 1");
  std::vector<Index> points;
  for (std::size_t r = 0; r <= count; ++r) {
    const auto base = static_cast<Index>(r + 1);
    Index v = 1;
    for (int i = 0; i < degree; ++i) {
      if (v > std::numeric_limits<Index>::max() / base) {
        throw std::invalid_argument("polynomial scheme overflows 64-bit points");
      }
      v *= base;
    }
    points.push_back(v);
  }
  return LacunaryScheme(std::move(points));
}

LacunaryScheme factorial_scheme(std::size_t count) {
  std::vector<Index> points{1};
  for (std::size_t r = 1; r <= count; ++r) {
    const auto factor = static_cast<Index>(r + 1);
    if (points.back() > std::numeric_limits<Index>::max() / factor) {
      throw std::invalid_argument("factorial scheme overflows 64-bit points");
    }
    points.push_back(points.back() * factor);
  }
  return LacunaryScheme(std::move(points));
}

RatioStats q_ratio_stats(const LacunaryScheme& scheme, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw std::invalid_argument("tail fraction must lie in (0, 1]");
  }
  const std::size_t blocks = scheme.block_count();
  if (blocks < 2) throw std::invalid_argument("ratio statistics need at least two ratios");
  const auto tail = static_cast<std::size_t>(std::floor(tail_fraction * static_cast<double>(blocks)));
  if (tail == 0) throw std::invalid_argument("ratio statistics tail is empty");
  RatioStats stats{std::numeric_limits<double>::infinity(), 0.0, tail};
  for (std::size_t r = blocks - tail + 1; r <= blocks; ++r) {
    stats.liminf = std::min(stats.liminf, scheme.ratio(r));
    stats.limsup = std::max(stats.limsup, scheme.ratio(r));
  }
  return stats;
}

bool is_refinement(const LacunaryScheme& coarse, const LacunaryScheme& fine) {
  const auto c = coarse.points();
  const auto f = fine.points();
  return std::includes(f.begin(), f.end(), c.begin(), c.end());
}

LacunaryScheme union_refinement(const LacunaryScheme& a, const LacunaryScheme& b) {
  std::vector<Index> merged;
  std::set_union(a.points().begin(), a.points().end(), b.points().begin(), b.points().end(),
                 std::back_inserter(merged));
  LacunaryScheme result(std::move(merged));
  if (!is_refinement(a, result) || !is_refinement(b, result)) {
    throw std::logic_error("union_refinement produced a scheme that refines neither input");
  }
  return result;
}

std::vector<BlockPairing> SchemeRelation::within(std::size_t coarse_block) const {
  std::vector<BlockPairing> out;
  for (const auto& p : pairings) {
    if (p.coarse_block == coarse_block) out.push_back(p);
  }
  return out;
}

namespace {

SchemeRelation intersect(const LacunaryScheme& a, const LacunaryScheme& b, RelationKind kind) {
  SchemeRelation rel;
  rel.kind = kind;
  rel.delta = Fraction{1, 1};
  std::size_t j = 1;
  for (std::size_t i = 1; i <= a.block_count(); ++i) {
    const Block bi = a.block(i);
    while (j <= b.block_count() && b.point(j) <= bi.lower) ++j;
    for (std::size_t k = j; k <= b.block_count(); ++k) {
      const Block bk = b.block(k);
      if (bk.lower >= bi.upper) break;
      const Block overlap{std::max(bi.lower, bk.lower), std::min(bi.upper, bk.upper)};
      const Fraction ratio{overlap.size(), bi.size()};
      rel.pairings.push_back(BlockPairing{i, k, overlap, ratio});
      rel.delta = std::min(rel.delta, ratio);
    }
  }
  return rel;
}

}  // namespace

SchemeRelation refinement_map(const LacunaryScheme& coarse, const LacunaryScheme& fine) {
  if (!is_refinement(coarse, fine)) {
    throw std::invalid_argument("refinement_map: fine scheme does not contain every coarse point");
  }
  return intersect(coarse, fine, RelationKind::Refinement);
}

SchemeRelation block_intersections(const LacunaryScheme& a, const LacunaryScheme& b) {
  return intersect(a, b, RelationKind::GeneralPair);
}

double coarse_block_density_from_fine(const SeqSample& x, const LacunaryScheme& coarse,
                                      const LacunaryScheme& fine, WitnessModulus n, double eps,
                                      std::size_t r) {
  const SchemeRelation rel = refinement_map(coarse, fine);
  const Index h = coarse.length(r);
  double total = 0.0;
  for (const auto& p : rel.within(r)) {
    total += static_cast<double>(fine.length(p.fine_block)) * block_density(x, fine, n, eps, p.fine_block);
  }
  return total / static_cast<double>(h);
}

}  // namespace gcdstat
