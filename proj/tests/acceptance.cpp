// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Usage: acceptance [scratch-dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "gcdstat/cli.hpp"
#include "gcdstat/continuity.hpp"
#include "gcdstat/density.hpp"
#include "gcdstat/theorems.hpp"

using namespace gcdstat;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kSuiteInstances = 1000;
constexpr std::size_t kRefinementInstances = 500;
constexpr Index kSuiteMaxLength = 10000;
constexpr std::uint64_t kSeed = 20240601;
constexpr double kAggregationTolerance = 1e-12;
constexpr double kFinalBlockTailLimit = 0.02;
constexpr double kScalingSeconds = 10.0;
constexpr double kSubadditivitySeconds = 10.0;
constexpr double kCorollarySeconds = 30.0;
constexpr std::size_t kCorollaryBlocks = 16;
constexpr Index kNegativeControlLength = 10000;

struct Verdict {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void report(const std::string& id, const std::string& title, const std::function<Verdict()>& body,
            double time_limit = 0.0) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v = body();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit > 0.0 && seconds >= time_limit) {
    v.ok = false;
    v.detail += "; exceeded time limit";
  }
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.2fs", seconds);
  std::string limit;
  if (time_limit > 0.0) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " < %.0fs", time_limit);
    limit = buf;
  }
  std::printf("%s %-22s %s [%s%s] %s\n", v.ok ? "PASS" : "FAIL", id.c_str(), title.c_str(), timing, limit.c_str(),
              v.detail.c_str());
  std::fflush(stdout);
  if (!v.ok) ++failures;
}

SuiteResult suite(Property property, std::size_t instances, std::uint64_t salt) {
  SuiteOptions options;
  options.instances = instances;
  options.seed = kSeed + salt;
  options.max_length = kSuiteMaxLength;
  return run_property_suite(property, options);
}

Verdict suite_verdict(const SuiteResult& s, std::size_t expected_instances) {
  Verdict v;
  v.ok = s.passed() && s.instances == expected_instances;
  v.detail = std::to_string(s.instances) + " instances, " + std::to_string(s.checks) + " checks, " +
             std::to_string(s.failures) + " failures";
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::vector<std::string>& args, std::string& out) {
  std::vector<const char*> argv{"gcdstat"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  out = o.str() + e.str();
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path scratch = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "gcdstat_acceptance";
  fs::create_directories(scratch);

  const EpsilonGrid grid = EpsilonGrid::standard();
  const VerdictPolicy policy;
  const LacunaryScheme scheme = geometric_scheme(2.0, kCorollaryBlocks, 1);
  const Index length = scheme.last() + 1;  // 2^16 + 1

  report("scaling_identity", "exceedance(c x, eps) == exceedance(x, eps/|c|) on both axes", [] {
    const SuiteResult s = suite(Property::ScalarClosure, kSuiteInstances, 1);
    Verdict v = suite_verdict(s, kSuiteInstances);
    // One prefix and one block comparison per instance.
    v.ok = v.ok && s.checks == 2 * kSuiteInstances;
    return v;
  }, kScalingSeconds);

  report("subadditivity", "exceedance(x + y, eps) within the eps/2 union", [] {
    return suite_verdict(suite(Property::SumClosure, kSuiteInstances, 2), kSuiteInstances);
  }, kSubadditivitySeconds);

  report("markov_step", "eps |block exceedance| <= block deviation sum", [] {
    return suite_verdict(suite(Property::MarkovStep, kSuiteInstances, 3), kSuiteInstances);
  });

  report("refinement_aggregation", "coarse density from fine blocks within 1e-12", [] {
    // The suite compares with check_refinement_aggregation's default tolerance.
    const SuiteResult s = suite(Property::RefinementAggregation, kRefinementInstances, 4);
    Verdict v = suite_verdict(s, kRefinementInstances);
    const auto x = generate(gen::spikes(gen::PowerSupport{3.0, 1}, {2.0}), 4097);
    const bool pinned = check_refinement_aggregation(x, geometric_scheme(4.0, 6, 1), geometric_scheme(2.0, 12, 1),
                                                     WitnessModulus(1), 1.0, 6, kAggregationTolerance)
                            .passed();
    v.ok = v.ok && pinned;
    return v;
  });

  report("delta_transfer", "per-block delta inequality, exact", [] {
    const SuiteResult s = suite(Property::DeltaTransfer, kRefinementInstances, 5);
    Verdict v = suite_verdict(s, kRefinementInstances);
    const auto tally = [&](const char* key) {
      const auto it = s.tallies.find(key);
      return it == s.tallies.end() ? std::size_t{0} : it->second;
    };
    v.ok = v.ok && tally("delta_one") > 0 && tally("singleton_block") > 0;
    v.detail += "; delta = 1 cases " + std::to_string(tally("delta_one")) + ", singleton-block cases " +
                std::to_string(tally("singleton_block"));
    return v;
  });

  report("lac1_bound", "prefix density at k_r >= (h_r/k_r) block density", [] {
    return suite_verdict(suite(Property::Lac1Bound, kSuiteInstances, 6), kSuiteInstances);
  });

  report("corollary", "ASC and ASC_theta agree on the 12-member family", [&] {
    const auto family = standard_family(length);
    const InclusionExperiment exp = run_inclusion_experiment(Hypothesis::Corollary, family, scheme, grid, policy);
    Verdict v;
    v.ok = family.size() == 12 && !exp.refused && exp.contradictions == 0 && exp.members.size() == 12;
    double worst_tail = 0.0;
    double worst_final = 0.0;
    std::size_t convergent = 0;
    for (const MemberResult& m : exp.members) {
      const bool left_conv = m.left.outcome == Outcome::ConvergentAtScale;
      const bool right_conv = m.right.outcome == Outcome::ConvergentAtScale;
      const bool agree = (left_conv && right_conv) || (left_conv && m.right.outcome == Outcome::Inconclusive) ||
                         (right_conv && m.left.outcome == Outcome::Inconclusive);
      v.ok = v.ok && agree;
      if (!right_conv) continue;
      ++convergent;
      for (const TailDensity& t : m.right.tail) worst_tail = std::max(worst_tail, t.density);
      const auto& sample = family[static_cast<std::size_t>(&m - exp.members.data())].sample;
      for (double eps : grid.values()) {
        worst_final = std::max(
            worst_final, block_density(sample, scheme, WitnessModulus(m.right.n), eps, scheme.blocks_within(length)));
      }
    }
    v.ok = v.ok && worst_tail <= kFinalBlockTailLimit && worst_final <= kFinalBlockTailLimit;
    v.detail = std::to_string(exp.supports) + " agree, " + std::to_string(exp.inconclusive) + " inconclusive, " +
               std::to_string(exp.contradictions) + " contradictions; " + std::to_string(convergent) +
               " convergent, max tail " + std::to_string(worst_tail) + ", max final block " +
               std::to_string(worst_final);
    return v;
  }, kCorollarySeconds);

  report("ac_implies_asc_theta", "gcd-periodic members have exact zero block tails", [&] {
    Verdict v;
    std::size_t count = 0;
    for (const FamilyMember& m : gcd_periodic_family(length)) {
      const ConvergenceVerdict verdict = asc_theta_verdict(m.sample, scheme, grid, policy);
      bool zero = verdict.outcome == Outcome::ConvergentAtScale;
      for (const TailDensity& t : verdict.tail) zero = zero && t.density == 0.0;
      v.ok = v.ok && zero;
      ++count;
    }
    v.ok = v.ok && count > 0;
    v.detail = std::to_string(count) + " members";
    return v;
  });

  report("uniform_limit", "3-set inclusion on every block for three f_N -> f families", [&] {
    std::vector<RealFunction> shifted, quadratic, clamped;
    for (int j = 0; j < 25; ++j) {
      const double inv = std::ldexp(1.0, -j);
      shifted.push_back(fn::affine(1.0, inv));
      quadratic.push_back(fn::polynomial({0.0, inv, 1.0}));
      clamped.push_back(fn::compose(fn::clamp(0.0, 1.0), fn::affine(1.0, inv)));
    }
    const std::vector<double> probe{-1.0, 0.0, 0.5, 1.0, 2.0};
    const std::vector<std::pair<const std::vector<RealFunction>*, RealFunction>> limits{
        {&shifted, fn::identity()}, {&quadratic, fn::polynomial({0.0, 0.0, 1.0})}, {&clamped, fn::clamp(0.0, 1.0)}};
    Verdict v;
    std::size_t checks = 0;
    std::size_t blocks = 0;
    for (const auto& [f_list, f] : limits) {
      for (const FamilyMember& m : continuity_family(length)) {
        for (Index n : {1, 6, 12}) {
          for (double eps : grid.values()) {
            const CheckReport r = uniform_limit_check(*f_list, f, m.sample, scheme, WitnessModulus(n), eps, probe);
            ++checks;
            v.ok = v.ok && r.passed();
            if (r.passed()) blocks += r.witness["blocks_checked"].get<std::size_t>();
          }
        }
      }
    }
    v.detail = std::to_string(checks) + " checks over " + std::to_string(blocks) + " blocks";
    return v;
  });

  report("negative_controls", "x_m = m diverges, r^2 refused, step contradicts", [&] {
    Verdict v;
    std::vector<double> ramp(static_cast<std::size_t>(kNegativeControlLength));
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i + 1);
    const bool diverges =
        asc_verdict(SeqSample(ramp), EpsilonGrid({1.0}), policy).outcome == Outcome::NotConvergentAtScale;
    const bool refused =
        run_inclusion_experiment(Hypothesis::Lac1, standard_family(length), polynomial_scheme(2, 99), grid, policy)
            .refused;
    const std::size_t contradictions =
        continuity_battery(fn::step(0.5), continuity_family(length), scheme, grid, policy).contradictions;
    v.ok = diverges && refused && contradictions >= 1;
    v.detail = std::string("ramp ") + (diverges ? "NotConvergentAtScale" : "not flagged") + ", lac1 " +
               (refused ? "refused" : "ran") + ", step contradictions " + std::to_string(contradictions);
    return v;
  });

  report("determinism", "two verify runs produce identical bytes", [&] {
    const fs::path out = scratch / "verify";
    const std::vector<std::string> args{"verify", "--seed", "7", "--out", out.string()};
    std::string log_a, log_b;
    const int code_a = run_cli(args, log_a);
    const std::string report_a = slurp(out / "verify_report.json");
    fs::remove_all(out);
    const int code_b = run_cli(args, log_b);
    const std::string report_b = slurp(out / "verify_report.json");
    Verdict v;
    v.ok = code_a == 0 && code_b == 0 && !report_a.empty() && report_a == report_b && log_a == log_b;
    v.detail = "exit codes " + std::to_string(code_a) + "/" + std::to_string(code_b) + ", " +
               std::to_string(report_a.size()) + " report bytes";
    return v;
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILED", failures);
  return failures == 0 ? 0 : 1;
}
