#include "gcdstat/continuity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gcdstat/io.hpp"
#include "overloaded.hpp"

namespace gcdstat {

using detail::overloaded;
using nlohmann::json;

namespace fn {

RealFunction identity() { return affine(1.0, 0.0); }
RealFunction affine(double a, double b) { return RealFunction{Affine{a, b}}; }
RealFunction polynomial(std::vector<double> coeffs) { return RealFunction{Polynomial{std::move(coeffs)}}; }
RealFunction clamp(double lo, double hi) { return RealFunction{Clamp{lo, hi}}; }

RealFunction compose(RealFunction outer, RealFunction inner) {
  return RealFunction{Composition{std::make_shared<const RealFunction>(std::move(outer)),
                                  std::make_shared<const RealFunction>(std::move(inner))}};
}

RealFunction sum(RealFunction left, RealFunction right) {
  return RealFunction{Sum{std::make_shared<const RealFunction>(std::move(left)),
                          std::make_shared<const RealFunction>(std::move(right))}};
}

RealFunction difference(RealFunction left, RealFunction right) {
  return RealFunction{Difference{std::make_shared<const RealFunction>(std::move(left)),
                                 std::make_shared<const RealFunction>(std::move(right))}};
}

RealFunction tabulated(std::vector<double> xs, std::vector<double> ys, Interpolation rule) {
  return RealFunction{Tabulated{std::move(xs), std::move(ys), rule}};
}

RealFunction step(double threshold) { return tabulated({threshold - 1.0, threshold}, {0.0, 1.0}, Interpolation::Step); }

}  // namespace fn

namespace {

double evaluate_table(const fn::Tabulated& t, double v) {
  if (v <= t.xs.front()) return t.ys.front();
  if (v >= t.xs.back()) return t.ys.back();
  // First sample point strictly greater than v; v lies in [xs[i-1], xs[i]).
  const auto it = std::upper_bound(t.xs.begin(), t.xs.end(), v);
  const auto i = static_cast<std::size_t>(it - t.xs.begin());
  if (t.rule == fn::Interpolation::Step) return t.ys[i - 1];
  const double w = (v - t.xs[i - 1]) / (t.xs[i] - t.xs[i - 1]);
  return t.ys[i - 1] + w * (t.ys[i] - t.ys[i - 1]);
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("invalid function descriptor: ") + what);
}

}  // namespace

double RealFunction::operator()(double v) const {
  return std::visit(overloaded{
                        [v](const fn::Affine& f) { return f.a * v + f.b; },
                        [v](const fn::Polynomial& f) {
                          double acc = 0.0;
                          for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) acc = acc * v + *it;
                          return acc;
                        },
                        [v](const fn::Clamp& f) { return std::clamp(v, f.lo, f.hi); },
                        [v](const fn::Composition& f) { return (*f.outer)((*f.inner)(v)); },
                        [v](const fn::Sum& f) { return (*f.left)(v) + (*f.right)(v); },
                        [v](const fn::Difference& f) { return (*f.left)(v) - (*f.right)(v); },
                        [v](const fn::Tabulated& f) { return evaluate_table(f, v); },
                    },
                    kind);
}

void validate(const RealFunction& f) {
  std::visit(overloaded{
                 [](const fn::Affine& g) { require(std::isfinite(g.a) && std::isfinite(g.b), "affine needs finite a, b"); },
                 [](const fn::Polynomial& g) {
                   for (double c : g.coeffs) require(std::isfinite(c), "polynomial coefficients must be finite");
                 },
                 [](const fn::Clamp& g) {
                   require(std::isfinite(g.lo) && std::isfinite(g.hi) && g.lo <= g.hi, "clamp needs finite lo <= hi");
                 },
                 [](const fn::Composition& g) {
                   require(g.outer && g.inner, "composition needs two functions");
                   validate(*g.outer);
                   validate(*g.inner);
                 },
                 [](const fn::Sum& g) {
                   require(g.left && g.right, "sum needs two functions");
                   validate(*g.left);
                   validate(*g.right);
                 },
                 [](const fn::Difference& g) {
                   require(g.left && g.right, "difference needs two functions");
                   validate(*g.left);
                   validate(*g.right);
                 },
                 [](const fn::Tabulated& g) {
                   require(!g.xs.empty() && g.xs.size() == g.ys.size(), "table needs matching nonempty xs and ys");
                   for (std::size_t i = 0; i < g.xs.size(); ++i) {
                     require(std::isfinite(g.xs[i]) && std::isfinite(g.ys[i]), "table entries must be finite");
                     require(i == 0 || g.xs[i] > g.xs[i - 1], "table xs must be strictly increasing");
                   }
                 },
             },
             f.kind);
}

SeqSample map_sequence(const RealFunction& f, const SeqSample& x) {
  validate(f);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(x.length()));
  for (double v : x.values()) values.push_back(f(v));
  return SeqSample(std::move(values));
}

ContinuityReport continuity_battery(const RealFunction& f, std::span<const FamilyMember> family,
                                    const LacunaryScheme& scheme, const EpsilonGrid& grid,
                                    const VerdictPolicy& policy) {
  if (family.empty()) throw std::invalid_argument("continuity battery needs a nonempty family");
  validate(f);
  ContinuityReport report{f, {}, 0, 0, 0, 0};
  for (const FamilyMember& member : family) {
    BatteryEntry entry{member.name, asc_theta_verdict(member.sample, scheme, grid, policy), std::nullopt,
                       MemberStatus::Vacuous};
    if (entry.input.outcome == Outcome::ConvergentAtScale) {
      entry.mapped = asc_theta_verdict(map_sequence(f, member.sample), scheme, grid, policy);
      entry.status = classify(entry.input, *entry.mapped);
    }
    switch (entry.status) {
      case MemberStatus::Supports:
        ++report.supports;
        break;
      case MemberStatus::Inconclusive:
        ++report.inconclusive;
        break;
      case MemberStatus::Vacuous:
        ++report.vacuous;
        break;
      case MemberStatus::Contradiction:
        ++report.contradictions;
        break;
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

CheckReport closure_checks(const RealFunction& f, const RealFunction& g, std::span<const FamilyMember> family,
                           const LacunaryScheme& scheme, const EpsilonGrid& grid, const VerdictPolicy& policy) {
  CheckReport report;
  report.check = "continuity_closure";
  report.instance = json{{"f", io::to_json(f)}, {"g", io::to_json(g)}, {"scheme", io::to_json(scheme)},
                         {"family", json::array()}};
  for (const auto& m : family) report.instance["family"].push_back(m.name);
  report.witness = json::object();

  const bool f_ok = continuity_battery(f, family, scheme, grid, policy).preserves();
  const bool g_ok = continuity_battery(g, family, scheme, grid, policy).preserves();
  report.witness["f_preserves"] = f_ok;
  report.witness["g_preserves"] = g_ok;
  if (!(f_ok && g_ok)) {
    report.witness["note"] = "premise not met; closure holds vacuously";
    return report;
  }
  const std::pair<const char*, RealFunction> combined[] = {
      {"sum", fn::sum(f, g)}, {"difference", fn::difference(f, g)}, {"composition", fn::compose(f, g)}};
  for (const auto& [label, h] : combined) {
    const ContinuityReport battery = continuity_battery(h, family, scheme, grid, policy);
    report.witness[label] = battery.preserves();
    if (!battery.preserves()) report.outcome = CheckOutcome::Fail;
  }
  return report;
}

CheckReport uniform_limit_check(std::span<const RealFunction> f_list, const RealFunction& f, const SeqSample& x,
                                const LacunaryScheme& scheme, WitnessModulus n, double eps,
                                std::span<const double> domain_probe) {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  validate(f);
  CheckReport report;
  report.check = "uniform_limit";
  report.instance = json{{"f", io::to_json(f)}, {"f_list_size", f_list.size()}, {"scheme", io::to_json(scheme)},
                         {"n", n.value()}, {"epsilon", eps}, {"length", x.length()}};
  if (x.recipe()) report.instance["generator"] = io::to_json(*x.recipe());
  report.witness = json::object();

  std::vector<double> probe(domain_probe.begin(), domain_probe.end());
  probe.insert(probe.end(), x.values().begin(), x.values().end());
  const double third = eps / 3.0;

  std::optional<std::size_t> chosen;
  for (std::size_t i = 0; i < f_list.size() && !chosen; ++i) {
    validate(f_list[i]);
    double sup = 0.0;
    for (double v : probe) sup = std::max(sup, std::abs(f_list[i](v) - f(v)));
    if (sup < third) chosen = i;
  }
  if (!chosen) {
    report.outcome = CheckOutcome::Refused;
    report.witness["reason"] = "no f_N is within eps/3 of f on the probe set";
    return report;
  }
  report.instance["chosen_index"] = *chosen;
  const RealFunction& fn_n = f_list[*chosen];

  std::size_t blocks_checked = 0;
  for (std::size_t r = 1; r <= scheme.blocks_within(x.length()); ++r) {
    const Block b = scheme.block(r);
    for (Index m = b.lower + 1; m <= b.upper; ++m) {
      const double xm = x[m];
      const double xd = x[std::gcd(m, n.value())];
      if (!(std::abs(f(xm) - f(xd)) >= eps)) continue;
      const bool covered = std::abs(fn_n(xd) - f(xd)) >= third || std::abs(fn_n(xd) - fn_n(xm)) >= third ||
                           std::abs(fn_n(xm) - f(xm)) >= third;
      if (!covered) {
        report.outcome = CheckOutcome::Fail;
        report.witness = json{{"block", r}, {"m", m}, {"x_m", xm}, {"x_gcd", xd}};
        return report;
      }
    }
    ++blocks_checked;
  }
  report.witness["blocks_checked"] = blocks_checked;
  return report;
}

SeqSample crossing_sequence(Index length, double level, Index switch_index) {
  std::vector<double> values(static_cast<std::size_t>(length));
  for (Index m = 1; m <= length; ++m) {
    values[static_cast<std::size_t>(m - 1)] = m <= switch_index ? level - 0.001 : level + 0.001;
  }
  return SeqSample(std::move(values));
}

std::vector<FamilyMember> continuity_family(Index length) {
  using namespace gen;
  std::vector<FamilyMember> family;
  family.push_back({"constant", generate(constant(0.25), length)});
  family.push_back({"gcd_periodic_6", generate(gcd_periodic(6, {{1, 0.0}, {2, 0.25}, {3, 0.5}, {6, 0.75}}), length)});
  family.push_back({"gcd_periodic_12_wide", generate(scaled(0.5, gcd_periodic(12, divisor_table(12))), length)});
  family.push_back({"spikes_pow2", generate(spikes(PowerSupport{2.0, 1}, {0.75}, 0.125), length)});
  family.push_back({"gcd_periodic_4_plus_spikes",
                    generate(sum(gcd_periodic(4, {{1, 0.0}, {2, 0.5}, {4, 1.0}}), spikes(PowerSupport{3.0, 2}, {2.0})),
                             length)});
  family.push_back({"crossing", crossing_sequence(length)});
  return family;
}

}  // namespace gcdstat
