#include "gcdstat/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gcdstat {

namespace {

void require_epsilon(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("epsilon must be a positive finite number");
  }
}

void require_prefix(const SeqSample& x, Index t) {
  if (t < 1 || t > x.length()) {
    throw std::out_of_range("prefix t = " + std::to_string(t) + " outside 1.." + std::to_string(x.length()));
  }
}

Block sample_block(const SeqSample& x, const LacunaryScheme& scheme, std::size_t r) {
  const Block b = scheme.block(r);
  if (b.upper > x.length()) {
    throw std::out_of_range("block " + std::to_string(r) + " ends at " + std::to_string(b.upper) +
                            ", beyond sample length " + std::to_string(x.length()));
  }
  return b;
}

std::vector<Index> members_in(const SeqSample& x, WitnessModulus n, double eps, Index lower, Index upper) {
  std::vector<Index> members;
  for (Index m = lower + 1; m <= upper; ++m) {
    if (deviation(x, m, n) >= eps) members.push_back(m);
  }
  return members;
}

}  // namespace

Index ExceedanceSet::range_size() const noexcept {
  if (const auto* p = std::get_if<PrefixRange>(&range)) return p->t;
  return std::get<BlockRange>(range).block.size();
}

double ExceedanceSet::density() const noexcept {
  return static_cast<double>(members.size()) / static_cast<double>(range_size());
}

std::vector<double> deviation_profile(const SeqSample& x, WitnessModulus n) {
  std::vector<double> d(static_cast<std::size_t>(x.length()));
  const Index modulus = n.value();
  for (Index m = 1; m <= x.length(); ++m) {
    d[static_cast<std::size_t>(m - 1)] = std::abs(x[m] - x[std::gcd(m, modulus)]);
  }
  return d;
}

ExceedanceSet exceedance_prefix(const SeqSample& x, WitnessModulus n, double eps, Index t) {
  require_epsilon(eps);
  require_prefix(x, t);
  return ExceedanceSet{PrefixRange{t}, eps, n.value(), members_in(x, n, eps, 0, t)};
}

double prefix_density(const SeqSample& x, WitnessModulus n, double eps, Index t) {
  return exceedance_prefix(x, n, eps, t).density();
}

ExceedanceSet block_exceedance(const SeqSample& x, const LacunaryScheme& scheme, WitnessModulus n, double eps,
                               std::size_t r) {
  require_epsilon(eps);
  const Block b = sample_block(x, scheme, r);
  return ExceedanceSet{BlockRange{r, b}, eps, n.value(), members_in(x, n, eps, b.lower, b.upper)};
}

double block_density(const SeqSample& x, const LacunaryScheme& scheme, WitnessModulus n, double eps,
                     std::size_t r) {
  return block_exceedance(x, scheme, n, eps, r).density();
}

std::vector<Index> prefix_checkpoints(Index length, double growth) {
  if (!(growth > 1.0) || !std::isfinite(growth)) {
    throw std::invalid_argument("checkpoint growth must exceed 1");
  }
  std::vector<Index> out;
  for (int j = 0;; ++j) {
    const double v = std::floor(std::pow(growth, j));
    if (v > static_cast<double>(length)) break;
    const auto t = static_cast<Index>(v);
    if (out.empty() || t > out.back()) out.push_back(t);
  }
  return out;
}

namespace {

// Density of {m <= t : d_m >= eps} at each checkpoint, in one pass.
std::vector<double> prefix_curve_values(std::span<const double> d, std::span<const Index> checkpoints,
                                        double eps) {
  std::vector<double> values;
  values.reserve(checkpoints.size());
  Index count = 0;
  Index m = 0;
  for (Index t : checkpoints) {
    for (; m < t; ++m) {
      if (d[static_cast<std::size_t>(m)] >= eps) ++count;
    }
    values.push_back(static_cast<double>(count) / static_cast<double>(t));
  }
  return values;
}

std::vector<double> block_curve_values(std::span<const double> d, const LacunaryScheme& scheme,
                                       std::size_t blocks, double eps) {
  std::vector<double> values;
  values.reserve(blocks);
  for (std::size_t r = 1; r <= blocks; ++r) {
    const Block b = scheme.block(r);
    Index count = 0;
    for (Index m = b.lower + 1; m <= b.upper; ++m) {
      if (d[static_cast<std::size_t>(m - 1)] >= eps) ++count;
    }
    values.push_back(static_cast<double>(count) / static_cast<double>(b.size()));
  }
  return values;
}

std::vector<double> block_mean_values(std::span<const double> d, const LacunaryScheme& scheme,
                                      std::size_t blocks) {
  std::vector<double> values;
  values.reserve(blocks);
  for (std::size_t r = 1; r <= blocks; ++r) {
    const Block b = scheme.block(r);
    double total = 0.0;
    for (Index m = b.lower + 1; m <= b.upper; ++m) total += d[static_cast<std::size_t>(m - 1)];
    values.push_back(total / static_cast<double>(b.size()));
  }
  return values;
}

TailDensity tail_of(std::span<const double> curve, std::size_t window, double eps) {
  const auto tail = curve.subspan(curve.size() - window);
  TailDensity out;
  out.epsilon = eps;
  out.density = std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(window);
  out.non_decreasing = std::is_sorted(tail.begin(), tail.end());
  return out;
}

struct Thresholds {
  double pass;
  double fail;
};

// `curves(d)` returns one curve per grid epsilon for the deviation profile d.
template <class CurvesFn>
ConvergenceVerdict search_witness(const SeqSample& x, Axis axis, const EpsilonGrid& grid,
                                  const VerdictPolicy& policy, Thresholds thresholds, CurvesFn curves) {
  validate(policy);
  ConvergenceVerdict verdict;
  verdict.axis = axis;
  verdict.grid.assign(grid.values().begin(), grid.values().end());
  verdict.policy = policy;

  bool every_candidate_fails = true;
  double best_worst = std::numeric_limits<double>::infinity();
  for (Index n = 1; n <= policy.n_max; ++n) {
    const auto d = deviation_profile(x, WitnessModulus{n});
    const std::vector<std::vector<double>> per_eps = curves(d);
    std::vector<TailDensity> tail;
    bool passes = true;
    bool fails = false;
    double worst = 0.0;
    for (std::size_t g = 0; g < per_eps.size(); ++g) {
      if (per_eps[g].size() < policy.tail_window) {
        throw std::invalid_argument("sample too short: " + std::to_string(per_eps[g].size()) +
                                    " curve points for a tail window of " + std::to_string(policy.tail_window));
      }
      tail.push_back(tail_of(per_eps[g], policy.tail_window, grid.values()[g]));
      const TailDensity& td = tail.back();
      passes = passes && td.density <= thresholds.pass;
      fails = fails || (td.density >= thresholds.fail && td.non_decreasing);
      worst = std::max(worst, td.density);
    }
    if (passes) {
      verdict.outcome = Outcome::ConvergentAtScale;
      verdict.witness = n;
      verdict.n = n;
      verdict.tail = std::move(tail);
      return verdict;
    }
    every_candidate_fails = every_candidate_fails && fails;
    if (worst < best_worst) {
      best_worst = worst;
      verdict.n = n;
      verdict.tail = std::move(tail);
    }
  }
  verdict.outcome = every_candidate_fails ? Outcome::NotConvergentAtScale : Outcome::Inconclusive;
  return verdict;
}

}  // namespace

DensityCurve density_curve(const SeqSample& x, WitnessModulus n, double eps, double growth) {
  require_epsilon(eps);
  const auto checkpoints = prefix_checkpoints(x.length(), growth);
  const auto values = prefix_curve_values(deviation_profile(x, n), checkpoints, eps);
  DensityCurve curve{Axis::Prefix, {}};
  for (std::size_t i = 0; i < checkpoints.size(); ++i) curve.points.push_back({checkpoints[i], values[i]});
  return curve;
}

DensityCurve density_curve(const SeqSample& x, const LacunaryScheme& scheme, WitnessModulus n, double eps) {
  require_epsilon(eps);
  const std::size_t blocks = scheme.blocks_within(x.length());
  const auto values = block_curve_values(deviation_profile(x, n), scheme, blocks, eps);
  DensityCurve curve{Axis::Block, {}};
  for (std::size_t r = 1; r <= blocks; ++r) {
    curve.points.push_back({static_cast<Index>(r), values[r - 1]});
  }
  return curve;
}

EpsilonGrid::EpsilonGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("epsilon grid must be nonempty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
      throw std::invalid_argument("epsilon grid values must be positive and finite");
    }
    if (i > 0 && !(values_[i] < values_[i - 1])) {
      throw std::invalid_argument("epsilon grid must be strictly decreasing");
    }
  }
}

EpsilonGrid EpsilonGrid::standard() { return EpsilonGrid({1.0, 0.5, 0.1, 0.05, 0.01}); }

void validate(const VerdictPolicy& policy) {
  if (policy.tail_window < 1) throw std::invalid_argument("tail window must be >= 1");
  if (policy.n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (!(policy.tol > 0.0) || !(policy.tol_hi > 0.0)) {
    throw std::invalid_argument("verdict tolerances must be positive");
  }
  if (!(policy.tol < policy.tol_hi)) throw std::invalid_argument("tol must be smaller than tol_hi");
  if (!(policy.growth > 1.0) || !std::isfinite(policy.growth)) {
    throw std::invalid_argument("checkpoint growth must exceed 1");
  }
}

ConvergenceVerdict asc_verdict(const SeqSample& x, const EpsilonGrid& grid, const VerdictPolicy& policy) {
  validate(policy);
  const auto checkpoints = prefix_checkpoints(x.length(), policy.growth);
  return search_witness(x, Axis::Prefix, grid, policy, {policy.tol, policy.tol_hi},
                        [&](const std::vector<double>& d) {
                          std::vector<std::vector<double>> curves;
                          for (double eps : grid.values()) curves.push_back(prefix_curve_values(d, checkpoints, eps));
                          return curves;
                        });
}

ConvergenceVerdict asc_theta_verdict(const SeqSample& x, const LacunaryScheme& scheme, const EpsilonGrid& grid,
                                     const VerdictPolicy& policy) {
  const std::size_t blocks = scheme.blocks_within(x.length());
  return search_witness(x, Axis::Block, grid, policy, {policy.tol, policy.tol_hi},
                        [&](const std::vector<double>& d) {
                          std::vector<std::vector<double>> curves;
                          for (double eps : grid.values()) curves.push_back(block_curve_values(d, scheme, blocks, eps));
                          return curves;
                        });
}

ConvergenceVerdict ac_theta_verdict(const SeqSample& x, const LacunaryScheme& scheme, const EpsilonGrid& grid,
                                    const VerdictPolicy& policy) {
  const std::size_t blocks = scheme.blocks_within(x.length());
  const Thresholds thresholds{policy.tol * grid.smallest(), policy.tol_hi * grid.largest()};
  return search_witness(x, Axis::Block, grid, policy, thresholds, [&](const std::vector<double>& d) {
    return std::vector<std::vector<double>>(grid.values().size(), block_mean_values(d, scheme, blocks));
  });
}

double stat_prefix_density(const SeqSample& x, double limit, double eps, Index t) {
  require_epsilon(eps);
  require_prefix(x, t);
  Index count = 0;
  for (Index m = 1; m <= t; ++m) {
    if (std::abs(x[m] - limit) >= eps) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(t);
}

double ac_sup_deviation(const SeqSample& x, WitnessModulus n) {
  const auto d = deviation_profile(x, n);
  return *std::max_element(d.begin(), d.end());
}

double ac_theta_block_mean(const SeqSample& x, const LacunaryScheme& scheme, WitnessModulus n, std::size_t r) {
  const Block b = sample_block(x, scheme, r);
  double total = 0.0;
  for (Index m = b.lower + 1; m <= b.upper; ++m) total += deviation(x, m, n);
  return total / static_cast<double>(b.size());
}

double ntheta_mean(const SeqSample& x, const LacunaryScheme& scheme, double limit, std::size_t r) {
  const Block b = sample_block(x, scheme, r);
  double total = 0.0;
  for (Index m = b.lower + 1; m <= b.upper; ++m) total += std::abs(x[m] - limit);
  return total / static_cast<double>(b.size());
}

double ntheta_norm(const SeqSample& x, const LacunaryScheme& scheme) {
  const std::size_t blocks = scheme.blocks_within(x.length());
  if (blocks == 0) throw std::out_of_range("no scheme block lies inside the sample");
  double norm = 0.0;
  for (std::size_t r = 1; r <= blocks; ++r) norm = std::max(norm, ntheta_mean(x, scheme, 0.0, r));
  return norm;
}

}  // namespace gcdstat
