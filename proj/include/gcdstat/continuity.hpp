#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gcdstat/density.hpp"
#include "gcdstat/kernel.hpp"
#include "gcdstat/lacunary.hpp"
#include "gcdstat/theorems.hpp"

namespace gcdstat {

struct RealFunction;
using FunctionPtr = std::shared_ptr<const RealFunction>;

namespace fn {

struct Affine {
  double a = 1.0;
  double b = 0.0;
};

// coeffs[i] multiplies v^i.
struct Polynomial {
  std::vector<double> coeffs;
};

struct Clamp {
  double lo = 0.0;
  double hi = 1.0;
};

// outer(inner(v))
struct Composition {
  FunctionPtr outer;
  FunctionPtr inner;
};

struct Sum {
  FunctionPtr left;
  FunctionPtr right;
};

struct Difference {
  FunctionPtr left;
  FunctionPtr right;
};

enum class Interpolation { Linear, Step };

// Piecewise function through (xs[i], ys[i]); constant beyond the end points.
// Step holds ys[i] on [xs[i], xs[i+1]).
struct Tabulated {
  std::vector<double> xs;
  std::vector<double> ys;
  Interpolation rule = Interpolation::Linear;
};

}  // namespace fn

struct RealFunction {
  std::variant<fn::Affine, fn::Polynomial, fn::Clamp, fn::Composition, fn::Sum, fn::Difference, fn::Tabulated>
      kind;

  double operator()(double v) const;
};

namespace fn {

RealFunction identity();
RealFunction affine(double a, double b);
RealFunction polynomial(std::vector<double> coeffs);
RealFunction clamp(double lo, double hi);
RealFunction compose(RealFunction outer, RealFunction inner);
RealFunction sum(RealFunction left, RealFunction right);
RealFunction difference(RealFunction left, RealFunction right);
RealFunction tabulated(std::vector<double> xs, std::vector<double> ys, Interpolation rule);
// 0 below threshold, 1 from threshold on.
RealFunction step(double threshold);

}  // namespace fn

// Throws std::invalid_argument on malformed descriptors (missing children, unsorted tables,
// clamp with lo > hi, non-finite parameters).
void validate(const RealFunction& f);

SeqSample map_sequence(const RealFunction& f, const SeqSample& x);

struct BatteryEntry {
  std::string name;
  ConvergenceVerdict input;
  std::optional<ConvergenceVerdict> mapped;
  MemberStatus status = MemberStatus::Vacuous;
};

struct ContinuityReport {
  RealFunction function;
  std::vector<BatteryEntry> entries;
  std::size_t supports = 0;
  std::size_t inconclusive = 0;
  std::size_t vacuous = 0;
  std::size_t contradictions = 0;

  bool preserves() const noexcept { return contradictions == 0; }
};

// Maps every ASC_theta-convergent member through f and records whether the image verdict
// contradicts convergence. Throws std::invalid_argument on an empty family.
ContinuityReport continuity_battery(const RealFunction& f, std::span<const FamilyMember> family,
                                    const LacunaryScheme& scheme, const EpsilonGrid& grid,
                                    const VerdictPolicy& policy);

// Passes iff, whenever f and g both preserve the battery, so do f + g, f - g and f∘g.
CheckReport closure_checks(const RealFunction& f, const RealFunction& g, std::span<const FamilyMember> family,
                           const LacunaryScheme& scheme, const EpsilonGrid& grid, const VerdictPolicy& policy);

// Picks the first f_N with max |f_N(v) - f(v)| < eps/3 over the probe values and the values of x,
// then checks on every block inside the sample that
//   {m : |f(x_m) - f(x_d)| >= eps} ⊆ {m : |f_N(x_d) - f(x_d)| >= eps/3}
//                                  ∪ {m : |f_N(x_d) - f_N(x_m)| >= eps/3}
//                                  ∪ {m : |f_N(x_m) - f(x_m)| >= eps/3},   d = gcd(m, n).
// Refused when no such N exists.
CheckReport uniform_limit_check(std::span<const RealFunction> f_list, const RealFunction& f, const SeqSample& x,
                                const LacunaryScheme& scheme, WitnessModulus n, double eps,
                                std::span<const double> domain_probe);

// Bounded gcd-periodic and spike members plus one sequence that converges across 0.5:
// x_m = 0.499 for m <= 64 and 0.501 beyond.
std::vector<FamilyMember> continuity_family(Index length);
SeqSample crossing_sequence(Index length, double level = 0.5, Index switch_index = 64);

}  // namespace gcdstat
