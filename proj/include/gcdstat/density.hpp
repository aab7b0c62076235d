#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "gcdstat/kernel.hpp"
#include "gcdstat/lacunary.hpp"

namespace gcdstat {

enum class Axis { Prefix, Block };

struct PrefixRange {
  Index t = 1;
};

struct BlockRange {
  std::size_t r = 1;
  Block block;
};

// Indices m in the range with deviation(x, m, n) >= epsilon, sorted.
struct ExceedanceSet {
  std::variant<PrefixRange, BlockRange> range;
  double epsilon = 0.0;
  Index witness = 1;
  std::vector<Index> members;

  Index range_size() const noexcept;
  std::size_t count() const noexcept { return members.size(); }
  double density() const noexcept;
};

// deviation(x, m, n) for m = 1..T, stored at position m - 1.
std::vector<double> deviation_profile(const SeqSample& x, WitnessModulus n);

ExceedanceSet exceedance_prefix(const SeqSample& x, WitnessModulus n, double eps, Index t);
double prefix_density(const SeqSample& x, WitnessModulus n, double eps, Index t);

ExceedanceSet block_exceedance(const SeqSample& x, const LacunaryScheme& scheme, WitnessModulus n, double eps,
                               std::size_t r);
double block_density(const SeqSample& x, const LacunaryScheme& scheme, WitnessModulus n, double eps,
                     std::size_t r);

struct CurvePoint {
  Index index = 0;
  double value = 0.0;
};

struct DensityCurve {
  Axis axis = Axis::Prefix;
  std::vector<CurvePoint> points;
};

// Distinct t = floor(growth^j) <= length, j = 0, 1, ...
std::vector<Index> prefix_checkpoints(Index length, double growth);

inline constexpr double kDefaultGrowth = 1.3;

// Prefix axis: one point per checkpoint.
DensityCurve density_curve(const SeqSample& x, WitnessModulus n, double eps, double growth = kDefaultGrowth);
// Block axis: one point per block inside the sample.
DensityCurve density_curve(const SeqSample& x, const LacunaryScheme& scheme, WitnessModulus n, double eps);

// Strictly decreasing positive epsilons standing in for "every eps > 0".
class EpsilonGrid {
 public:
  explicit EpsilonGrid(std::vector<double> values);
  static EpsilonGrid standard();

  std::span<const double> values() const noexcept { return values_; }
  double smallest() const noexcept { return values_.back(); }
  double largest() const noexcept { return values_.front(); }

 private:
  std::vector<double> values_;
};

struct VerdictPolicy {
  std::size_t tail_window = 8;
  double tol = 0.02;
  double tol_hi = 0.2;
  Index n_max = 64;
  double growth = kDefaultGrowth;
};

// Throws std::invalid_argument unless every field is positive, tol < tol_hi and growth > 1.
void validate(const VerdictPolicy& policy);

enum class Outcome { ConvergentAtScale, NotConvergentAtScale, Inconclusive };

struct TailDensity {
  double epsilon = 0.0;
  double density = 0.0;
  bool non_decreasing = false;
};

// Tail densities belong to `n`: the witness when convergent, otherwise the candidate
// whose worst tail density was smallest.
struct ConvergenceVerdict {
  Axis axis = Axis::Prefix;
  Outcome outcome = Outcome::Inconclusive;
  std::optional<Index> witness;
  Index n = 1;
  std::vector<TailDensity> tail;
  std::vector<double> grid;
  VerdictPolicy policy;
};

// Searches n = 1..n_max. ConvergentAtScale at the first n whose tail mean is <= tol for every
// epsilon; NotConvergentAtScale when every n has some epsilon with tail mean >= tol_hi over a
// non-decreasing tail; Inconclusive otherwise. Throws std::invalid_argument when the curve has
// fewer points than the tail window.
ConvergenceVerdict asc_verdict(const SeqSample& x, const EpsilonGrid& grid, const VerdictPolicy& policy);
ConvergenceVerdict asc_theta_verdict(const SeqSample& x, const LacunaryScheme& scheme, const EpsilonGrid& grid,
                                     const VerdictPolicy& policy);

// Verdict on the block means of deviations. The pass threshold is tol * smallest(grid) so that
// a convergent result forces a convergent asc_theta_verdict for the same n; the fail threshold is
// tol_hi * largest(grid).
ConvergenceVerdict ac_theta_verdict(const SeqSample& x, const LacunaryScheme& scheme, const EpsilonGrid& grid,
                                    const VerdictPolicy& policy);

// (1/t) |{m <= t : |x_m - limit| >= eps}|
double stat_prefix_density(const SeqSample& x, double limit, double eps, Index t);

// max over m <= T of deviation(x, m, n)
double ac_sup_deviation(const SeqSample& x, WitnessModulus n);

// (1/h_r) sum over I_r of deviation(x, m, n)
double ac_theta_block_mean(const SeqSample& x, const LacunaryScheme& scheme, WitnessModulus n, std::size_t r);

// (1/h_r) sum over I_r of |x_m - limit|
double ntheta_mean(const SeqSample& x, const LacunaryScheme& scheme, double limit, std::size_t r);

// max over blocks inside the sample of (1/h_r) sum over I_r of |x_m|
double ntheta_norm(const SeqSample& x, const LacunaryScheme& scheme);

}  // namespace gcdstat
