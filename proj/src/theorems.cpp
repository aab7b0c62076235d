#include "gcdstat/theorems.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>
#include <limits>
#include <stdexcept>

#include "gcdstat/io.hpp"

namespace gcdstat {

using nlohmann::json;

namespace {

constexpr std::size_t kWitnessLimit = 16;
constexpr std::size_t kFailureSamples = 5;

json sequence_descriptor(const SeqSample& x) {
  json j{{"length", x.length()}};
  if (x.recipe()) j["generator"] = io::to_json(*x.recipe());
  return j;
}

json head(const std::vector<Index>& v) {
  return json(std::vector<Index>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min(v.size(), kWitnessLimit))));
}

std::vector<Index> set_difference(const std::vector<Index>& a, const std::vector<Index>& b) {
  std::vector<Index> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<Index> set_union(const std::vector<Index>& a, const std::vector<Index>& b) {
  std::vector<Index> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

CheckReport make_report(std::string name, json instance) {
  CheckReport report;
  report.check = std::move(name);
  report.instance = std::move(instance);
  report.outcome = CheckOutcome::Pass;
  report.witness = json::object();
  return report;
}

void fail(CheckReport& report, json witness) {
  report.outcome = CheckOutcome::Fail;
  report.witness = std::move(witness);
}

// Compares exceedance(c x, eps_left) with exceedance(x, eps_right) on the prefix t = T
// (scheme == nullptr) or on every block inside the sample.
CheckReport scalar_closure(const SeqSample& x, double c, WitnessModulus n, double eps_left, double eps_right,
                           const LacunaryScheme* scheme) {
  json instance{{"sequence", sequence_descriptor(x)}, {"c", c}, {"n", n.value()}, {"epsilon", eps_left},
                {"axis", scheme ? "block" : "prefix"}};
  if (scheme) instance["scheme"] = io::to_json(*scheme);
  CheckReport report = make_report("scalar_closure", std::move(instance));

  const SeqSample cx = scale_sample(x, c);
  auto compare = [&](const std::vector<Index>& left, const std::vector<Index>& right, json where) {
    if (left == right) return true;
    where["only_scaled"] = head(set_difference(left, right));
    where["only_rescaled_epsilon"] = head(set_difference(right, left));
    fail(report, std::move(where));
    return false;
  };
  if (!scheme) {
    const auto left = exceedance_prefix(cx, n, eps_left, x.length()).members;
    const auto right =
        c == 0.0 ? std::vector<Index>{} : exceedance_prefix(x, n, eps_right, x.length()).members;
    compare(left, right, json{{"t", x.length()}});
    return report;
  }
  for (std::size_t r = 1; r <= scheme->blocks_within(x.length()); ++r) {
    const auto left = block_exceedance(cx, *scheme, n, eps_left, r).members;
    const auto right =
        c == 0.0 ? std::vector<Index>{} : block_exceedance(x, *scheme, n, eps_right, r).members;
    if (!compare(left, right, json{{"block", r}})) break;
  }
  return report;
}

CheckReport sum_closure(const SeqSample& x, const SeqSample& y, WitnessModulus n, double eps,
                        const LacunaryScheme* scheme) {
  json instance{{"x", sequence_descriptor(x)}, {"y", sequence_descriptor(y)}, {"n", n.value()},
                {"epsilon", eps}, {"axis", scheme ? "block" : "prefix"}};
  if (scheme) instance["scheme"] = io::to_json(*scheme);
  CheckReport report = make_report("sum_closure", std::move(instance));

  const SeqSample xy = add_samples(x, y);
  auto check = [&](const std::vector<Index>& sum_set, const std::vector<Index>& x_set,
                   const std::vector<Index>& y_set, json where) {
    const auto uncovered = set_difference(sum_set, set_union(x_set, y_set));
    if (uncovered.empty()) return true;
    where["uncovered"] = head(uncovered);
    fail(report, std::move(where));
    return false;
  };
  if (!scheme) {
    const Index t = x.length();
    check(exceedance_prefix(xy, n, eps, t).members, exceedance_prefix(x, n, eps / 2, t).members,
          exceedance_prefix(y, n, eps / 2, t).members, json{{"t", t}});
    return report;
  }
  for (std::size_t r = 1; r <= scheme->blocks_within(x.length()); ++r) {
    if (!check(block_exceedance(xy, *scheme, n, eps, r).members,
               block_exceedance(x, *scheme, n, eps / 2, r).members,
               block_exceedance(y, *scheme, n, eps / 2, r).members, json{{"block", r}})) {
      break;
    }
  }
  return report;
}

// prefix_counts[t] = |{m <= t : deviation >= eps}|
std::vector<Index> prefix_counts(const SeqSample& x, WitnessModulus n, double eps) {
  const auto d = deviation_profile(x, n);
  std::vector<Index> counts(d.size() + 1, 0);
  for (std::size_t i = 0; i < d.size(); ++i) counts[i + 1] = counts[i] + (d[i] >= eps ? 1 : 0);
  return counts;
}

CheckReport lac1_bound(const SeqSample& x, const LacunaryScheme& scheme, WitnessModulus n, double eps,
                       std::size_t r, const std::vector<Index>& counts) {
  CheckReport report = make_report(
      "lac1_bound", json{{"sequence", sequence_descriptor(x)}, {"scheme", io::to_json(scheme)},
                         {"n", n.value()}, {"epsilon", eps}, {"block", r}});
  const Block b = scheme.block(r);
  if (b.upper > x.length()) throw std::out_of_range("lac1 bound: block lies beyond the sample");
  const Index k = b.upper;
  const Index h = b.size();
  const Index prefix_count = counts[static_cast<std::size_t>(k)];
  const Index block_count = prefix_count - counts[static_cast<std::size_t>(b.lower)];
  // (h/k) * (block_count/h) as a single fraction over k*h.
  const Fraction lhs{prefix_count, k};
  const Fraction rhs{h * block_count, k * h};
  if (lhs < rhs) {
    const double sigma = scheme.ratio(r) - 1.0;
    fail(report, json{{"prefix_count", prefix_count},
                      {"block_count", block_count},
                      {"prefix_density", lhs.value()},
                      {"bound", rhs.value()},
                      {"sigma", sigma}});
  }
  return report;
}

struct DeltaOutcome {
  CheckReport report;
  bool has_singleton = false;
  bool delta_one = false;
};

DeltaOutcome delta_transfer(const SeqSample& x, const LacunaryScheme& coarse, const LacunaryScheme& fine,
                            WitnessModulus n, double eps) {
  DeltaOutcome out{make_report("delta_transfer", json{{"sequence", sequence_descriptor(x)},
                                                      {"coarse", io::to_json(coarse)},
                                                      {"fine", io::to_json(fine)},
                                                      {"n", n.value()},
                                                      {"epsilon", eps}}),
                   false, false};
  const SchemeRelation rel = refinement_map(coarse, fine);
  const Fraction delta = rel.delta;
  out.delta_one = delta == Fraction{1, 1};
  out.report.instance["delta"] = json{delta.num, delta.den};
  const auto counts = prefix_counts(x, n, eps);
  auto count_in = [&](const Block& b) {
    return counts[static_cast<std::size_t>(b.upper)] - counts[static_cast<std::size_t>(b.lower)];
  };
  for (std::size_t i = 1; i <= coarse.blocks_within(x.length()); ++i) {
    const Block outer = coarse.block(i);
    const Index outer_count = count_in(outer);
    for (const auto& p : rel.within(i)) {
      if (p.overlap.size() == 1 && outer.size() > 1) out.has_singleton = true;
      // |ex(J)|/|J| <= (den/num) * |ex(I)|/|I|
      const Fraction lhs{count_in(p.overlap), p.overlap.size()};
      const Fraction rhs{delta.den * outer_count, delta.num * outer.size()};
      if (lhs > rhs) {
        fail(out.report, json{{"coarse_block", i},
                              {"fine_block", p.fine_block},
                              {"fine_density", lhs.value()},
                              {"bound", rhs.value()}});
        return out;
      }
    }
  }
  return out;
}

}  // namespace

CheckReport check_scalar_closure(const SeqSample& x, double c, WitnessModulus n, double eps) {
  return scalar_closure(x, c, n, eps, c == 0.0 ? eps : eps / std::abs(c), nullptr);
}

CheckReport check_scalar_closure(const SeqSample& x, double c, WitnessModulus n, double eps,
                                 const LacunaryScheme& scheme) {
  return scalar_closure(x, c, n, eps, c == 0.0 ? eps : eps / std::abs(c), &scheme);
}

CheckReport check_sum_closure(const SeqSample& x, const SeqSample& y, WitnessModulus n, double eps) {
  return sum_closure(x, y, n, eps, nullptr);
}

CheckReport check_sum_closure(const SeqSample& x, const SeqSample& y, WitnessModulus n, double eps,
                              const LacunaryScheme& scheme) {
  return sum_closure(x, y, n, eps, &scheme);
}

CheckReport check_markov_step(const SeqSample& x, const LacunaryScheme& scheme, WitnessModulus n, double eps,
                              std::size_t r) {
  CheckReport report = make_report(
      "markov_step", json{{"sequence", sequence_descriptor(x)}, {"scheme", io::to_json(scheme)},
                          {"n", n.value()}, {"epsilon", eps}, {"block", r}});
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const Block b = scheme.block(r);
  if (b.upper > x.length()) throw std::out_of_range("markov step: block lies beyond the sample");
  double deviation_sum = 0.0;
  double epsilon_sum = 0.0;
  Index count = 0;
  for (Index m = b.lower + 1; m <= b.upper; ++m) {
    const double d = deviation(x, m, n);
    deviation_sum += d;
    if (d >= eps) {
      epsilon_sum += eps;
      ++count;
    }
  }
  if (!(epsilon_sum <= deviation_sum)) {
    fail(report, json{{"count", count}, {"epsilon_times_count", epsilon_sum}, {"deviation_sum", deviation_sum}});
  }
  return report;
}

CheckReport check_lac1_bound(const SeqSample& x, const LacunaryScheme& scheme, WitnessModulus n, double eps,
                             std::size_t r) {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  return lac1_bound(x, scheme, n, eps, r, prefix_counts(x, n, eps));
}

CheckReport check_delta_transfer(const SeqSample& x, const LacunaryScheme& coarse, const LacunaryScheme& fine,
                                 WitnessModulus n, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  return delta_transfer(x, coarse, fine, n, eps).report;
}

CheckReport check_refinement_aggregation(const SeqSample& x, const LacunaryScheme& coarse,
                                         const LacunaryScheme& fine, WitnessModulus n, double eps, std::size_t r,
                                         double tolerance) {
  CheckReport report = make_report("refinement_aggregation", json{{"sequence", sequence_descriptor(x)},
                                                                   {"coarse", io::to_json(coarse)},
                                                                   {"fine", io::to_json(fine)},
                                                                   {"n", n.value()},
                                                                   {"epsilon", eps},
                                                                   {"block", r},
                                                                   {"tolerance", tolerance}});
  const double aggregated = coarse_block_density_from_fine(x, coarse, fine, n, eps, r);
  const double direct = block_density(x, coarse, n, eps, r);
  if (!(std::abs(aggregated - direct) <= tolerance)) {
    fail(report, json{{"aggregated", aggregated}, {"direct", direct}});
  }
  return report;
}

// ---------------------------------------------------------------------------

MemberStatus classify(const ConvergenceVerdict& left, const ConvergenceVerdict& right) {
  if (left.outcome != Outcome::ConvergentAtScale) return MemberStatus::Vacuous;
  switch (right.outcome) {
    case Outcome::NotConvergentAtScale:
      return MemberStatus::Contradiction;
    case Outcome::Inconclusive:
      return MemberStatus::Inconclusive;
    case Outcome::ConvergentAtScale:
      break;
  }
  return MemberStatus::Supports;
}

namespace {

MemberStatus combine(MemberStatus a, MemberStatus b) {
  // Severity order: Contradiction > Inconclusive > Supports > Vacuous.
  auto rank = [](MemberStatus s) {
    switch (s) {
      case MemberStatus::Contradiction:
        return 3;
      case MemberStatus::Inconclusive:
        return 2;
      case MemberStatus::Supports:
        return 1;
      case MemberStatus::Vacuous:
        break;
    }
    return 0;
  };
  return rank(a) >= rank(b) ? a : b;
}

}  // namespace

InclusionExperiment run_inclusion_experiment(Hypothesis hypothesis, std::span<const FamilyMember> family,
                                             const LacunaryScheme& scheme, const EpsilonGrid& grid,
                                             const VerdictPolicy& policy, const HypothesisPolicy& hypotheses) {
  if (family.empty()) throw std::invalid_argument("inclusion experiment needs a nonempty family");
  InclusionExperiment exp;
  exp.hypothesis = hypothesis;

  if (hypothesis != Hypothesis::AcSubset) {
    try {
      exp.ratio_stats = q_ratio_stats(scheme, hypotheses.tail_fraction);
    } catch (const std::invalid_argument& e) {
      exp.refused = true;
      exp.refusal_reason = std::string("ratio statistics unavailable: ") + e.what();
      return exp;
    }
    const RatioStats& stats = *exp.ratio_stats;
    const bool needs_liminf = hypothesis == Hypothesis::Lac1 || hypothesis == Hypothesis::Corollary;
    const bool needs_limsup = hypothesis == Hypothesis::Lac2 || hypothesis == Hypothesis::Corollary;
    if (needs_liminf && !(stats.liminf > hypotheses.min_liminf)) {
      exp.refused = true;
      exp.refusal_reason = "liminf q_r estimate " + io::format_number(stats.liminf) + " does not exceed " +
                           io::format_number(hypotheses.min_liminf);
      return exp;
    }
    if (needs_limsup && !(stats.limsup <= hypotheses.max_limsup)) {
      exp.refused = true;
      exp.refusal_reason = "limsup q_r estimate " + io::format_number(stats.limsup) + " exceeds " +
                           io::format_number(hypotheses.max_limsup);
      return exp;
    }
  }

  for (const FamilyMember& member : family) {
    MemberResult result{member.name, {}, {}, MemberStatus::Vacuous};
    switch (hypothesis) {
      case Hypothesis::Lac1:
        result.left = asc_verdict(member.sample, grid, policy);
        result.right = asc_theta_verdict(member.sample, scheme, grid, policy);
        result.status = classify(result.left, result.right);
        break;
      case Hypothesis::Lac2:
        result.left = asc_theta_verdict(member.sample, scheme, grid, policy);
        result.right = asc_verdict(member.sample, grid, policy);
        result.status = classify(result.left, result.right);
        break;
      case Hypothesis::Corollary:
        result.left = asc_verdict(member.sample, grid, policy);
        result.right = asc_theta_verdict(member.sample, scheme, grid, policy);
        result.status = combine(classify(result.left, result.right), classify(result.right, result.left));
        break;
      case Hypothesis::AcSubset:
        result.left = ac_theta_verdict(member.sample, scheme, grid, policy);
        result.right = asc_theta_verdict(member.sample, scheme, grid, policy);
        result.status = classify(result.left, result.right);
        break;
    }
    switch (result.status) {
      case MemberStatus::Supports:
        ++exp.supports;
        break;
      case MemberStatus::Inconclusive:
        ++exp.inconclusive;
        break;
      case MemberStatus::Vacuous:
        ++exp.vacuous;
        break;
      case MemberStatus::Contradiction:
        ++exp.contradictions;
        break;
    }
    exp.members.push_back(std::move(result));
  }
  return exp;
}

namespace {

std::map<Index, double> spread_table(Index modulus, double offset) {
  // Distinct values one unit apart, so every grid epsilon separates them.
  std::map<Index, double> table;
  double v = offset;
  for (Index d : divisors(modulus)) {
    table[d] = v;
    v += 1.0;
  }
  return table;
}

FamilyMember member(std::string name, const GeneratorSpec& spec, Index length) {
  return FamilyMember{std::move(name), generate(spec, length)};
}

}  // namespace

std::vector<FamilyMember> standard_family(Index length) {
  using namespace gen;
  const auto powers2 = PowerSupport{2.0, 1};
  const auto powers2_high = PowerSupport{2.0, 6};
  const auto powers3 = PowerSupport{3.0, 1};
  const auto powers3_mid = PowerSupport{3.0, 3};
  const auto powers5 = PowerSupport{5.0, 1};
  const auto random_sparse = RandomSupport{1.0, 0.75, 65, 11};
  const auto random_log = RandomSupport{1.0, 1.0, 100, 5};

  std::vector<FamilyMember> family;
  family.push_back(member("constant", constant(3.0), length));
  family.push_back(member("gcd_periodic_6", gcd_periodic(6, divisor_table(6)), length));
  family.push_back(member("gcd_periodic_12", gcd_periodic(12, spread_table(12, -2.0)), length));
  family.push_back(member("spikes_pow2", spikes(powers2, {10.0}), length));
  family.push_back(member("spikes_pow3", spikes(powers3, {-5.0, 2.5}, 1.0), length));
  family.push_back(member("spikes_random", spikes(random_sparse, {4.0}), length));
  family.push_back(member("gcd_periodic_12_plus_spikes",
                          sum(gcd_periodic(12, spread_table(12, 0.0)), spikes(powers2_high, {7.0})), length));
  family.push_back(member("scaled_gcd_periodic_6_plus_spikes",
                          scaled(-3.0, sum(gcd_periodic(6, divisor_table(6)), spikes(powers3_mid, {2.0}))),
                          length));
  family.push_back(member("scaled_spikes_random", scaled(0.5, spikes(random_sparse, {4.0})), length));
  family.push_back(member("gcd_periodic_4_plus_9",
                          sum(gcd_periodic(4, divisor_table(4)), gcd_periodic(9, spread_table(9, 0.5))), length));
  family.push_back(member("spikes_pow2_plus_pow5", sum(spikes(powers2, {1.0}), spikes(powers5, {-2.0})), length));
  family.push_back(member("scaled_gcd_periodic_10_plus_random",
                          sum(scaled(2.0, gcd_periodic(10, divisor_table(10))), spikes(random_log, {3.0})),
                          length));
  return family;
}

std::vector<FamilyMember> gcd_periodic_family(Index length) {
  using namespace gen;
  std::vector<FamilyMember> family;
  family.push_back(member("constant", constant(-1.5), length));
  family.push_back(member("gcd_periodic_6", gcd_periodic(6, divisor_table(6)), length));
  family.push_back(member("gcd_periodic_12", gcd_periodic(12, spread_table(12, -2.0)), length));
  family.push_back(member("gcd_periodic_4_plus_9",
                          sum(gcd_periodic(4, divisor_table(4)), gcd_periodic(9, spread_table(9, 0.5))), length));
  family.push_back(member("scaled_gcd_periodic_10", scaled(2.0, gcd_periodic(10, divisor_table(10))), length));
  family.push_back(member("scaled_gcd_periodic_30", scaled(-0.5, gcd_periodic(30, spread_table(30, 3.0))), length));
  return family;
}

// ---------------------------------------------------------------------------

InstanceSampler::InstanceSampler(std::uint64_t seed, Index max_length) : engine_(seed), max_length_(max_length) {
  if (max_length < 16) throw std::invalid_argument("instance sampler needs max_length >= 16");
}

std::uint64_t InstanceSampler::below(std::uint64_t bound) { return engine_() % bound; }

double InstanceSampler::dyadic(int lo_eighths, int hi_eighths) {
  const auto span = static_cast<std::uint64_t>(hi_eighths - lo_eighths + 1);
  return static_cast<double>(lo_eighths + static_cast<int>(below(span))) / 8.0;
}

Index InstanceSampler::length() {
  const Index lo = std::min<Index>(64, max_length_);
  return lo + static_cast<Index>(below(static_cast<std::uint64_t>(max_length_ - lo + 1)));
}

GeneratorSpec InstanceSampler::generator(int depth) {
  const std::uint64_t choice = depth >= 2 ? below(3) : below(5);
  switch (choice) {
    case 0:
      return gen::constant(dyadic(-32, 32));
    case 1: {
      const auto modulus = static_cast<Index>(1 + below(36));
      std::map<Index, double> table;
      for (Index d : divisors(modulus)) table[d] = dyadic(-32, 32);
      return gen::gcd_periodic(modulus, std::move(table));
    }
    case 2: {
      gen::SupportRule rule;
      switch (below(3)) {
        case 0:
          rule = gen::PowerSupport{below(2) == 0 ? 2.0 : 3.0, static_cast<int>(below(4))};
          break;
        case 1: {
          static constexpr std::array<double, 4> scales{0.05, 0.2, 0.5, 1.0};
          static constexpr std::array<double, 3> exponents{0.0, 0.5, 1.0};
          rule = gen::RandomSupport{scales[below(scales.size())], exponents[below(exponents.size())],
                                    static_cast<Index>(1 + below(50)), engine_()};
          break;
        }
        default: {
          gen::ExplicitSupport s;
          for (auto p = static_cast<Index>(1 + below(20)); p <= max_length_;
               p += 1 + static_cast<Index>(below(static_cast<std::uint64_t>(p / 4 + 3)))) {
            s.points.push_back(p);
          }
          rule = std::move(s);
          break;
        }
      }
      std::vector<double> heights(1 + below(3));
      for (double& h : heights) h = dyadic(-64, 64);
      return gen::spikes(std::move(rule), std::move(heights), dyadic(-16, 16));
    }
    case 3: {
      static constexpr std::array<double, 6> factors{0.5, -0.5, 2.0, -2.0, 0.25, -1.0};
      const double factor = factors[below(factors.size())];
      return gen::scaled(factor, generator(depth + 1));
    }
    default: {
      GeneratorSpec left = generator(depth + 1);
      return gen::sum(std::move(left), generator(depth + 1));
    }
  }
}

LacunaryScheme InstanceSampler::scheme(Index length) {
  switch (below(4)) {
    case 0: {
      const double ratio = below(2) == 0 ? 2.0 : 3.0;
      const auto start = static_cast<Index>(1 + below(4));
      std::size_t count = 0;
      for (Index k = start * static_cast<Index>(ratio); k <= length; k *= static_cast<Index>(ratio)) ++count;
      if (count > 0) return geometric_scheme(ratio, count, start);
      break;
    }
    case 1: {
      const int degree = below(2) == 0 ? 2 : 3;
      std::size_t count = 0;
      while (std::pow(static_cast<double>(count + 2), degree) <= static_cast<double>(length)) ++count;
      if (count > 0) return polynomial_scheme(degree, count);
      break;
    }
    case 2: {
      std::size_t count = 0;
      Index k = 1;
      while (k * static_cast<Index>(count + 2) <= length) {
        k *= static_cast<Index>(count + 2);
        ++count;
      }
      if (count > 0) return factorial_scheme(count);
      break;
    }
    default: {
      std::vector<Index> points{static_cast<Index>(1 + below(8))};
      while (true) {
        const Index next = points.back() + 1 + static_cast<Index>(below(static_cast<std::uint64_t>(2 + points.back() / 3)));
        if (next > length) break;
        points.push_back(next);
      }
      if (points.size() >= 2) return LacunaryScheme(std::move(points));
      break;
    }
  }
  return geometric_scheme(2.0, 1, 1);
}

LacunaryScheme InstanceSampler::refinement(const LacunaryScheme& coarse, RefinementShape shape) {
  std::vector<Index> points(coarse.points().begin(), coarse.points().end());
  switch (shape) {
    case RefinementShape::Self:
      return coarse;
    case RefinementShape::Singletons: {
      bool inserted = false;
      for (std::size_t r = 1; r <= coarse.block_count(); ++r) {
        const Block b = coarse.block(r);
        if (b.size() >= 2 && (below(2) == 0 || (!inserted && r == coarse.block_count()))) {
          points.push_back(b.lower + 1);
          inserted = true;
        }
      }
      break;
    }
    case RefinementShape::Random: {
      for (std::size_t r = 1; r <= coarse.block_count(); ++r) {
        const Block b = coarse.block(r);
        if (b.size() < 2) continue;
        for (std::uint64_t k = below(4); k > 0; --k) {
          points.push_back(b.lower + 1 + static_cast<Index>(below(static_cast<std::uint64_t>(b.size() - 1))));
        }
      }
      if (coarse.first() > 1 && below(2) == 0) {
        points.push_back(1 + static_cast<Index>(below(static_cast<std::uint64_t>(coarse.first() - 1))));
      }
      if (below(2) == 0) points.push_back(coarse.last() + 1 + static_cast<Index>(below(10)));
      break;
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return LacunaryScheme(std::move(points));
}

WitnessModulus InstanceSampler::witness() { return WitnessModulus{static_cast<Index>(1 + below(64))}; }

double InstanceSampler::epsilon() {
  static constexpr std::array<double, 11> choices{1.0, 0.5, 0.1, 0.05, 0.01, 0.25, 0.125, 0.375, 1.5, 2.0, 3.0};
  return choices[below(choices.size())];
}

double InstanceSampler::scale_factor() {
  static constexpr std::array<double, 4> magnitudes{0.5, 1.0, 3.0, 10.0};
  const double c = magnitudes[below(magnitudes.size())];
  return below(2) == 0 ? c : -c;
}

namespace {

class SuiteRecorder {
 public:
  explicit SuiteRecorder(std::string name) { result_.name = std::move(name); }

  void record(CheckReport report) {
    ++result_.checks;
    if (report.failed()) {
      ++result_.failures;
      if (result_.failure_samples.size() < kFailureSamples) result_.failure_samples.push_back(std::move(report));
    }
  }
  void tally(const std::string& key) { ++result_.tallies[key]; }
  SuiteResult finish(std::size_t instances) {
    result_.instances = instances;
    return std::move(result_);
  }

 private:
  SuiteResult result_;
};

std::uint64_t suite_seed(std::uint64_t seed, Property property) {
  return seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(property) + 1);
}

}  // namespace

SuiteResult run_property_suite(Property property, const SuiteOptions& options) {
  InstanceSampler sampler(suite_seed(options.seed, property), options.max_length);
  SuiteRecorder recorder(to_string(property));
  for (std::size_t i = 0; i < options.instances; ++i) {
    const Index length = sampler.length();
    const SeqSample x = generate(sampler.generator(), length);
    const WitnessModulus n = sampler.witness();
    const double eps = sampler.epsilon();
    switch (property) {
      case Property::ScalarClosure: {
        const double c = sampler.scale_factor();
        const LacunaryScheme scheme = sampler.scheme(length);
        const double eps_right = (options.fault == Fault::MutatedScalingEpsilon ? 1.5 * eps : eps) / std::abs(c);
        recorder.record(scalar_closure(x, c, n, eps, eps_right, nullptr));
        recorder.record(scalar_closure(x, c, n, eps, eps_right, &scheme));
        break;
      }
      case Property::SumClosure: {
        const SeqSample y = generate(sampler.generator(), length);
        const LacunaryScheme scheme = sampler.scheme(length);
        recorder.record(check_sum_closure(x, y, n, eps));
        recorder.record(check_sum_closure(x, y, n, eps, scheme));
        break;
      }
      case Property::MarkovStep: {
        const LacunaryScheme scheme = sampler.scheme(length);
        for (std::size_t r = 1; r <= scheme.blocks_within(length); ++r) {
          recorder.record(check_markov_step(x, scheme, n, eps, r));
        }
        break;
      }
      case Property::Lac1Bound: {
        const LacunaryScheme scheme = sampler.scheme(length);
        const auto counts = prefix_counts(x, n, eps);
        for (std::size_t r = 1; r <= scheme.blocks_within(length); ++r) {
          recorder.record(lac1_bound(x, scheme, n, eps, r, counts));
        }
        break;
      }
      case Property::RefinementAggregation:
      case Property::DeltaTransfer: {
        const LacunaryScheme coarse = sampler.scheme(length);
        const auto shape = static_cast<InstanceSampler::RefinementShape>(i % 3);
        const LacunaryScheme fine = sampler.refinement(coarse, shape);
        if (property == Property::RefinementAggregation) {
          for (std::size_t r = 1; r <= coarse.blocks_within(length); ++r) {
            recorder.record(check_refinement_aggregation(x, coarse, fine, n, eps, r));
          }
        } else {
          DeltaOutcome out = delta_transfer(x, coarse, fine, n, eps);
          if (out.delta_one) recorder.tally("delta_one");
          if (out.has_singleton) recorder.tally("singleton_block");
          recorder.record(std::move(out.report));
        }
        break;
      }
    }
  }
  return recorder.finish(options.instances);
}

std::string to_string(Property property) {
  switch (property) {
    case Property::ScalarClosure:
      return "scalar_closure";
    case Property::SumClosure:
      return "sum_closure";
    case Property::MarkovStep:
      return "markov_step";
    case Property::RefinementAggregation:
      return "refinement_aggregation";
    case Property::DeltaTransfer:
      return "delta_transfer";
    case Property::Lac1Bound:
      return "lac1_bound";
  }
  return "unknown";
}

std::string to_string(Hypothesis hypothesis) {
  switch (hypothesis) {
    case Hypothesis::Lac1:
      return "lac1";
    case Hypothesis::Lac2:
      return "lac2";
    case Hypothesis::Corollary:
      return "corollary";
    case Hypothesis::AcSubset:
      return "ac_subset";
  }
  return "unknown";
}

std::string to_string(MemberStatus status) {
  switch (status) {
    case MemberStatus::Supports:
      return "supports";
    case MemberStatus::Inconclusive:
      return "inconclusive";
    case MemberStatus::Vacuous:
      return "vacuous";
    case MemberStatus::Contradiction:
      return "contradiction";
  }
  return "unknown";
}

std::string to_string(CheckOutcome outcome) {
  switch (outcome) {
    case CheckOutcome::Pass:
      return "pass";
    case CheckOutcome::Fail:
      return "fail";
    case CheckOutcome::Refused:
      return "refused";
  }
  return "unknown";
}

}  // namespace gcdstat
