#include "gcdstat/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "overloaded.hpp"

namespace gcdstat::io {

using detail::overloaded;

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_string(Axis axis) { return axis == Axis::Prefix ? "prefix" : "block"; }

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::ConvergentAtScale:
      return "ConvergentAtScale";
    case Outcome::NotConvergentAtScale:
      return "NotConvergentAtScale";
    case Outcome::Inconclusive:
      return "Inconclusive";
  }
  return "unknown";
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) bad(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

Index integer(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) bad(std::string("field '") + key + "' must be an integer");
  return v.get<Index>();
}

Index integer_or(const json& j, const char* key, Index fallback) {
  return j.contains(key) ? integer(j, key) : fallback;
}

std::vector<double> numbers(const json& j) {
  if (!j.is_array()) bad("expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) bad("expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<Index> integers(const json& j) {
  if (!j.is_array()) bad("expected an array of integers");
  std::vector<Index> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) bad("expected an array of integers");
    out.push_back(v.get<Index>());
  }
  return out;
}

json support_to_json(const gen::SupportRule& rule) {
  return std::visit(overloaded{
                        [](const gen::ExplicitSupport& s) { return json{{"rule", "explicit"}, {"points", s.points}}; },
                        [](const gen::PowerSupport& s) {
                          return json{{"rule", "powers"}, {"base", s.base}, {"min_exponent", s.min_exponent}};
                        },
                        [](const gen::RandomSupport& s) {
                          return json{{"rule", "random"},
                                      {"scale", s.scale},
                                      {"exponent", s.exponent},
                                      {"min_index", s.min_index},
                                      {"seed", s.seed}};
                        },
                    },
                    rule);
}

gen::SupportRule support_from_json(const json& j) {
  const json& rule = field(j, "rule");
  if (!rule.is_string()) bad("support rule must be a string");
  const auto name = rule.get<std::string>();
  if (name == "explicit") return gen::ExplicitSupport{integers(field(j, "points"))};
  if (name == "powers") {
    return gen::PowerSupport{number_or(j, "base", 2.0), static_cast<int>(integer_or(j, "min_exponent", 1))};
  }
  if (name == "random") {
    gen::RandomSupport s;
    s.scale = number_or(j, "scale", 1.0);
    s.exponent = number_or(j, "exponent", 0.5);
    s.min_index = integer_or(j, "min_index", 1);
    if (j.contains("seed")) {
      if (!j.at("seed").is_number_unsigned()) bad("support seed must be a nonnegative integer");
      s.seed = j.at("seed").get<std::uint64_t>();
    }
    return s;
  }
  bad("unknown support rule '" + name + "'");
}

std::string kind_of(const json& j) {
  const json& k = field(j, "kind");
  if (!k.is_string()) bad("'kind' must be a string");
  return k.get<std::string>();
}

}  // namespace

json to_json(const GeneratorSpec& spec) {
  return std::visit(overloaded{
                        [](const gen::Constant& c) { return json{{"kind", "constant"}, {"value", c.value}}; },
                        [](const gen::GcdPeriodic& g) {
                          json table = json::object();
                          for (const auto& [d, v] : g.table) table[std::to_string(d)] = v;
                          return json{{"kind", "gcd_periodic"}, {"modulus", g.modulus}, {"table", table}};
                        },
                        [](const gen::SparseSpike& s) {
                          return json{{"kind", "sparse_spike"},
                                      {"base", s.base},
                                      {"heights", s.heights},
                                      {"support", support_to_json(s.support)}};
                        },
                        [](const gen::Scaled& s) {
                          return json{{"kind", "scaled"}, {"factor", s.factor}, {"child", to_json(*s.child)}};
                        },
                        [](const gen::Sum& s) {
                          return json{{"kind", "sum"}, {"left", to_json(*s.left)}, {"right", to_json(*s.right)}};
                        },
                    },
                    spec.kind);
}

GeneratorSpec generator_from_json(const json& j) {
  const std::string kind = kind_of(j);
  GeneratorSpec spec;
  if (kind == "constant") {
    spec = gen::constant(number(j, "value"));
  } else if (kind == "gcd_periodic") {
    const Index modulus = integer(j, "modulus");
    const json& table = field(j, "table");
    if (table.is_string() && table.get<std::string>() == "divisor") {
      if (modulus < 1) bad("gcd_periodic modulus must be >= 1");
      spec = gen::gcd_periodic(modulus, gen::divisor_table(modulus));
    } else {
      if (!table.is_object()) bad("gcd_periodic table must be an object keyed by divisor or \"divisor\"");
      std::map<Index, double> values;
      for (const auto& [key, v] : table.items()) {
        Index d = 0;
        const auto res = std::from_chars(key.data(), key.data() + key.size(), d);
        if (res.ec != std::errc{} || res.ptr != key.data() + key.size()) bad("table key '" + key + "' is not an integer");
        if (!v.is_number()) bad("table values must be numbers");
        values[d] = v.get<double>();
      }
      spec = gen::gcd_periodic(modulus, std::move(values));
    }
  } else if (kind == "sparse_spike") {
    std::vector<double> heights{1.0};
    if (j.contains("heights")) {
      heights = j.at("heights").is_number() ? std::vector<double>{j.at("heights").get<double>()} : numbers(j.at("heights"));
    }
    gen::SupportRule support = gen::PowerSupport{};
    if (j.contains("support")) support = support_from_json(j.at("support"));
    spec = gen::spikes(std::move(support), std::move(heights), number_or(j, "base", 0.0));
  } else if (kind == "scaled") {
    spec = gen::scaled(number(j, "factor"), generator_from_json(field(j, "child")));
  } else if (kind == "sum") {
    spec = gen::sum(generator_from_json(field(j, "left")), generator_from_json(field(j, "right")));
  } else {
    bad("unknown generator kind '" + kind + "'");
  }
  validate(spec);
  return spec;
}

LacunaryScheme scheme_from_json(const json& j) {
  if (j.is_array()) return make_scheme(integers(j));
  if (!j.is_object()) bad("scheme spec must be an array or an object");
  if (j.contains("points")) return make_scheme(integers(j.at("points")));
  auto count_of = [](const json& g) {
    const Index count = integer(g, "count");
    if (count < 1) bad("scheme count must be >= 1");
    return static_cast<std::size_t>(count);
  };
  if (j.contains("geometric")) {
    const json& g = j.at("geometric");
    return geometric_scheme(number(g, "ratio"), count_of(g), integer_or(g, "start", 1));
  }
  if (j.contains("polynomial")) {
    const json& g = j.at("polynomial");
    return polynomial_scheme(static_cast<int>(integer(g, "degree")), count_of(g));
  }
  if (j.contains("factorial")) return factorial_scheme(count_of(j.at("factorial")));
  bad("scheme spec needs one of points, geometric, polynomial, factorial");
}

json to_json(const LacunaryScheme& scheme) {
  return json{{"points", std::vector<Index>(scheme.points().begin(), scheme.points().end())}};
}

json to_json(const RealFunction& f) {
  return std::visit(overloaded{
                        [](const fn::Affine& g) { return json{{"kind", "affine"}, {"a", g.a}, {"b", g.b}}; },
                        [](const fn::Polynomial& g) { return json{{"kind", "polynomial"}, {"coeffs", g.coeffs}}; },
                        [](const fn::Clamp& g) { return json{{"kind", "clamp"}, {"lo", g.lo}, {"hi", g.hi}}; },
                        [](const fn::Composition& g) {
                          return json{{"kind", "composition"}, {"outer", to_json(*g.outer)}, {"inner", to_json(*g.inner)}};
                        },
                        [](const fn::Sum& g) {
                          return json{{"kind", "sum"}, {"left", to_json(*g.left)}, {"right", to_json(*g.right)}};
                        },
                        [](const fn::Difference& g) {
                          return json{{"kind", "difference"}, {"left", to_json(*g.left)}, {"right", to_json(*g.right)}};
                        },
                        [](const fn::Tabulated& g) {
                          return json{{"kind", "tabulated"},
                                      {"xs", g.xs},
                                      {"ys", g.ys},
                                      {"rule", g.rule == fn::Interpolation::Step ? "step" : "linear"}};
                        },
                    },
                    f.kind);
}

RealFunction function_from_json(const json& j) {
  const std::string kind = kind_of(j);
  RealFunction f;
  if (kind == "affine") {
    f = fn::affine(number(j, "a"), number_or(j, "b", 0.0));
  } else if (kind == "polynomial") {
    f = fn::polynomial(numbers(field(j, "coeffs")));
  } else if (kind == "clamp") {
    f = fn::clamp(number(j, "lo"), number(j, "hi"));
  } else if (kind == "composition") {
    f = fn::compose(function_from_json(field(j, "outer")), function_from_json(field(j, "inner")));
  } else if (kind == "sum") {
    f = fn::sum(function_from_json(field(j, "left")), function_from_json(field(j, "right")));
  } else if (kind == "difference") {
    f = fn::difference(function_from_json(field(j, "left")), function_from_json(field(j, "right")));
  } else if (kind == "tabulated") {
    fn::Interpolation rule = fn::Interpolation::Linear;
    if (j.contains("rule")) {
      const auto name = j.at("rule").get<std::string>();
      if (name == "step") {
        rule = fn::Interpolation::Step;
      } else if (name != "linear") {
        bad("unknown interpolation rule '" + name + "'");
      }
    }
    f = fn::tabulated(numbers(field(j, "xs")), numbers(field(j, "ys")), rule);
  } else {
    bad("unknown function kind '" + kind + "'");
  }
  validate(f);
  return f;
}

json to_json(const RatioStats& stats) {
  return json{{"liminf_estimate", stats.liminf}, {"limsup_estimate", stats.limsup}, {"tail_blocks", stats.tail_blocks}};
}

json to_json(const ConvergenceVerdict& verdict) {
  json tail = json::array();
  for (const auto& t : verdict.tail) {
    tail.push_back(json{{"epsilon", t.epsilon}, {"tail_density", t.density}, {"non_decreasing", t.non_decreasing}});
  }
  return json{{"axis", to_string(verdict.axis)},
              {"outcome", to_string(verdict.outcome)},
              {"witness", verdict.witness ? json(*verdict.witness) : json(nullptr)},
              {"n", verdict.n},
              {"tail", tail},
              {"policy",
               {{"tail_window", verdict.policy.tail_window},
                {"tol", verdict.policy.tol},
                {"tol_hi", verdict.policy.tol_hi},
                {"n_max", verdict.policy.n_max},
                {"growth", verdict.policy.growth},
                {"epsilon_grid", verdict.grid}}}};
}

json to_json(const SchemeRelation& relation) {
  json pairs = json::array();
  for (const auto& p : relation.pairings) {
    pairs.push_back(json{{"coarse_block", p.coarse_block},
                         {"fine_block", p.fine_block},
                         {"lower", p.overlap.lower},
                         {"upper", p.overlap.upper},
                         {"size", p.overlap.size()},
                         {"ratio", p.ratio.value()}});
  }
  const auto g = std::gcd(relation.delta.num, relation.delta.den);
  const Index num = g > 0 ? relation.delta.num / g : relation.delta.num;
  const Index den = g > 0 ? relation.delta.den / g : relation.delta.den;
  return json{{"kind", relation.kind == RelationKind::Refinement ? "refinement" : "general_pair"},
              {"pairings", pairs},
              {"delta", relation.delta.value()},
              {"delta_exact", {num, den}}};
}

json to_json(const CheckReport& report) {
  return json{{"check", report.check},
              {"instance", report.instance},
              {"outcome", gcdstat::to_string(report.outcome)},
              {"witness", report.witness}};
}

json to_json(const InclusionExperiment& experiment) {
  json members = json::array();
  for (const auto& m : experiment.members) {
    members.push_back(json{{"name", m.name},
                           {"left", to_json(m.left)},
                           {"right", to_json(m.right)},
                           {"status", gcdstat::to_string(m.status)}});
  }
  return json{{"hypothesis", gcdstat::to_string(experiment.hypothesis)},
              {"refused", experiment.refused},
              {"refusal_reason", experiment.refusal_reason},
              {"ratio_stats", experiment.ratio_stats ? to_json(*experiment.ratio_stats) : json(nullptr)},
              {"members", members},
              {"summary",
               {{"supports", experiment.supports},
                {"inconclusive", experiment.inconclusive},
                {"vacuous", experiment.vacuous},
                {"contradictions", experiment.contradictions}}}};
}

json to_json(const SuiteResult& suite) {
  json failures = json::array();
  for (const auto& f : suite.failure_samples) failures.push_back(to_json(f));
  return json{{"name", suite.name},       {"instances", suite.instances}, {"checks", suite.checks},
              {"failures", suite.failures}, {"passed", suite.passed()},     {"failure_samples", failures},
              {"tallies", suite.tallies}};
}

json to_json(const ContinuityReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    entries.push_back(json{{"name", e.name},
                           {"input", to_json(e.input)},
                           {"mapped", e.mapped ? to_json(*e.mapped) : json(nullptr)},
                           {"status", gcdstat::to_string(e.status)}});
  }
  return json{{"function", to_json(report.function)},
              {"entries", entries},
              {"summary",
               {{"supports", report.supports},
                {"inconclusive", report.inconclusive},
                {"vacuous", report.vacuous},
                {"contradictions", report.contradictions}}}};
}

void write_curve_rows(std::ostream& out, const DensityCurve& curve, double eps, Index witness_n) {
  const std::string axis = to_string(curve.axis);
  const std::string eps_text = format_number(eps);
  for (const auto& p : curve.points) {
    out << axis << ',' << p.index << ',' << eps_text << ',' << witness_n << ',' << format_number(p.value) << '\n';
  }
}

std::vector<double> read_sequence_csv(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r,");
    const std::string_view text(line.data() + first, last + 1 - first);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
      bad("line " + std::to_string(line_no) + ": '" + std::string(text) + "' is not a finite number");
    }
    values.push_back(v);
  }
  if (values.empty()) bad("sequence CSV contains no values");
  return values;
}

}  // namespace gcdstat::io
