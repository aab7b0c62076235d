#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "gcdstat/density.hpp"
#include "gcdstat/kernel.hpp"
#include "gcdstat/lacunary.hpp"

namespace gcdstat {

enum class CheckOutcome { Pass, Fail, Refused };

// Result of one exact finite check. `instance` is enough to rebuild the inputs;
// `witness` holds the offending indices or values when the check fails or is refused.
struct CheckReport {
  std::string check;
  nlohmann::json instance;
  CheckOutcome outcome = CheckOutcome::Pass;
  nlohmann::json witness;

  bool passed() const noexcept { return outcome == CheckOutcome::Pass; }
  bool failed() const noexcept { return outcome == CheckOutcome::Fail; }
};

// exceedance(c x, eps) == exceedance(x, eps / |c|) as index sets; prefix t = T, or every
// block inside the sample. c == 0 passes iff c x has no exceedances.
CheckReport check_scalar_closure(const SeqSample& x, double c, WitnessModulus n, double eps);
CheckReport check_scalar_closure(const SeqSample& x, double c, WitnessModulus n, double eps,
                                 const LacunaryScheme& scheme);

// exceedance(x + y, eps) ⊆ exceedance(x, eps/2) ∪ exceedance(y, eps/2)
CheckReport check_sum_closure(const SeqSample& x, const SeqSample& y, WitnessModulus n, double eps);
CheckReport check_sum_closure(const SeqSample& x, const SeqSample& y, WitnessModulus n, double eps,
                              const LacunaryScheme& scheme);

// eps * |block exceedance| <= sum of deviations over I_r. Both sides are accumulated in
// index order, so rounding is monotone and the comparison stays exact.
CheckReport check_markov_step(const SeqSample& x, const LacunaryScheme& scheme, WitnessModulus n, double eps,
                              std::size_t r);

// prefix_density(k_r) >= (h_r / k_r) * block_density(r), compared as exact rationals.
CheckReport check_lac1_bound(const SeqSample& x, const LacunaryScheme& scheme, WitnessModulus n, double eps,
                             std::size_t r);

// For every fine J inside a coarse I within the sample:
// |ex(J)| / |J| <= (1 / delta) |ex(I)| / |I|, compared as exact rationals.
CheckReport check_delta_transfer(const SeqSample& x, const LacunaryScheme& coarse, const LacunaryScheme& fine,
                                 WitnessModulus n, double eps);

// |coarse_block_density_from_fine - block_density(coarse)| <= tolerance on block r.
CheckReport check_refinement_aggregation(const SeqSample& x, const LacunaryScheme& coarse,
                                         const LacunaryScheme& fine, WitnessModulus n, double eps, std::size_t r,
                                         double tolerance = 1e-12);

// ---------------------------------------------------------------------------
// Inclusion experiments

enum class Hypothesis { Lac1, Lac2, Corollary, AcSubset };

// Finite surrogates for the ratio hypotheses: liminf q_r > 1 becomes liminf estimate > min_liminf,
// limsup q_r < infinity becomes limsup estimate <= max_limsup.
struct HypothesisPolicy {
  double tail_fraction = 0.5;
  double min_liminf = 1.05;
  double max_limsup = 10.0;
};

struct FamilyMember {
  std::string name;
  SeqSample sample;
};

enum class MemberStatus { Supports, Inconclusive, Vacuous, Contradiction };

// `left` is the verdict of the smaller space, `right` the larger. For the corollary both
// directions are checked with left = ASC and right = ASC_theta.
struct MemberResult {
  std::string name;
  ConvergenceVerdict left;
  ConvergenceVerdict right;
  MemberStatus status = MemberStatus::Vacuous;
};

// Classifies one implication "left convergent => right not NotConvergent".
MemberStatus classify(const ConvergenceVerdict& left, const ConvergenceVerdict& right);

struct InclusionExperiment {
  Hypothesis hypothesis = Hypothesis::Lac1;
  bool refused = false;
  std::string refusal_reason;
  std::optional<RatioStats> ratio_stats;
  std::vector<MemberResult> members;
  std::size_t supports = 0;
  std::size_t inconclusive = 0;
  std::size_t vacuous = 0;
  std::size_t contradictions = 0;

  bool failed() const noexcept { return contradictions > 0; }
};

// Refuses (without computing verdicts) when the scheme misses the hypothesis. Throws
// std::invalid_argument on an empty family.
InclusionExperiment run_inclusion_experiment(Hypothesis hypothesis, std::span<const FamilyMember> family,
                                             const LacunaryScheme& scheme, const EpsilonGrid& grid,
                                             const VerdictPolicy& policy, const HypothesisPolicy& hypotheses = {});

// Twelve members built from gcd-periodic bases, density-zero spikes, scalings and sums.
std::vector<FamilyMember> standard_family(Index length);
// Members whose deviation vanishes identically for some n <= 64.
std::vector<FamilyMember> gcd_periodic_family(Index length);

// ---------------------------------------------------------------------------
// Randomized property suites

// Deterministic source of random test instances. Sequence values are multiples of 1/8 of
// modest size, so scalings by the sampled factors and pairwise sums are exact in doubles.
class InstanceSampler {
 public:
  enum class RefinementShape { Self, Singletons, Random };

  explicit InstanceSampler(std::uint64_t seed, Index max_length = 10000);

  Index length();
  GeneratorSpec generator(int depth = 0);
  LacunaryScheme scheme(Index length);
  LacunaryScheme refinement(const LacunaryScheme& coarse, RefinementShape shape);
  WitnessModulus witness();
  double epsilon();
  double scale_factor();

 private:
  std::uint64_t below(std::uint64_t bound);
  double dyadic(int lo_eighths, int hi_eighths);

  std::mt19937_64 engine_;
  Index max_length_;
};

enum class Property { ScalarClosure, SumClosure, MarkovStep, RefinementAggregation, DeltaTransfer, Lac1Bound };

// MutatedScalingEpsilon compares against exceedance(x, 1.5 eps / |c|): a deliberately wrong
// identity used to prove that the harness notices failures.
enum class Fault { None, MutatedScalingEpsilon };

struct SuiteOptions {
  std::size_t instances = 1000;
  std::uint64_t seed = 1;
  Index max_length = 10000;
  Fault fault = Fault::None;
};

struct SuiteResult {
  std::string name;
  std::size_t instances = 0;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::vector<CheckReport> failure_samples;  // first few failures
  std::map<std::string, std::size_t> tallies;

  bool passed() const noexcept { return failures == 0 && checks > 0; }
};

SuiteResult run_property_suite(Property property, const SuiteOptions& options);

std::string to_string(Property property);
std::string to_string(Hypothesis hypothesis);
std::string to_string(MemberStatus status);
std::string to_string(CheckOutcome outcome);

}  // namespace gcdstat
