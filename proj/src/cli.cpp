#include "gcdstat/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "gcdstat/continuity.hpp"
#include "gcdstat/io.hpp"
#include "gcdstat/kernel.hpp"
#include "gcdstat/lacunary.hpp"

namespace gcdstat::cli {

using nlohmann::json;

namespace {

std::string command_name(Command c) {
  switch (c) {
    case Command::Analyze:
      return "analyze";
    case Command::Scheme:
      return "scheme";
    case Command::Verify:
      return "verify";
  }
  return "unknown";
}

bool is_inline_json(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  return first != std::string::npos && (arg[first] == '{' || arg[first] == '[');
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json parse_json_arg(const std::string& arg) {
  const std::string text = is_inline_json(arg) ? arg : read_file(arg);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError("malformed JSON in '" + arg + "': " + e.what());
  }
}

template <class F>
auto as_input(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw InputError(what + ": " + e.what());
  } catch (const json::exception& e) {
    throw InputError(what + ": " + e.what());
  }
}

bool wants_generator(const std::string& arg) {
  if (is_inline_json(arg)) return true;
  auto ext = std::filesystem::path(arg).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".json";
}

SeqSample load_sequence(const RunConfig& config) {
  if (config.input.empty()) throw ConfigError("--input is required");
  if (wants_generator(config.input)) {
    const json j = parse_json_arg(config.input);
    const GeneratorSpec spec = as_input("generator spec", [&] { return io::generator_from_json(j); });
    return generate(spec, config.length > 0 ? config.length : kDefaultAnalyzeLength);
  }
  std::ifstream in(config.input, std::ios::binary);
  if (!in) throw InputError("cannot open '" + config.input + "'");
  std::vector<double> values = as_input("sequence CSV '" + config.input + "'", [&] { return io::read_sequence_csv(in); });
  if (config.length > 0) {
    if (static_cast<std::size_t>(config.length) > values.size()) {
      throw InputError("sequence CSV has " + std::to_string(values.size()) + " values, fewer than --length");
    }
    values.resize(static_cast<std::size_t>(config.length));
  }
  return SeqSample(std::move(values));
}

LacunaryScheme load_scheme(const std::string& arg) {
  const json j = parse_json_arg(arg);
  return as_input("scheme spec", [&] { return io::scheme_from_json(j); });
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void prepare_out(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec) throw InputError("cannot create output directory '" + config.out.string() + "': " + ec.message());
}

json report_header(const RunConfig& config) {
  return json{{"schema", io::kSchemaVersion}, {"command", command_name(config.command)}, {"config", to_json(config)}};
}

std::string verdict_line(const std::string& label, const ConvergenceVerdict& v) {
  return label + ": " + io::to_string(v.outcome) + " (n=" + std::to_string(v.n) + ")";
}

}  // namespace

void validate(const RunConfig& config) {
  try {
    gcdstat::validate(config.policy);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (config.length < 0) throw ConfigError("--length must be positive");
  if (config.eps_grid.empty()) throw ConfigError("--eps-grid needs at least one value");
  for (double e : config.eps_grid) {
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("--eps-grid values must be positive and finite");
  }
  if (config.instances == 0) throw ConfigError("--instances must be positive");
  if (config.command == Command::Verify && config.length > 0 && config.length < 16) {
    throw ConfigError("--length must be at least 16 for verify");
  }
}

json to_json(const RunConfig& config) {
  return json{{"command", command_name(config.command)},
              {"input", config.input},
              {"schemes", config.schemes},
              {"length", config.length},
              {"eps_grid", config.eps_grid},
              {"n_max", config.policy.n_max},
              {"tail_window", config.policy.tail_window},
              {"tol", config.policy.tol},
              {"tol_hi", config.policy.tol_hi},
              {"growth", config.policy.growth},
              {"out", config.out.generic_string()},
              {"seed", config.seed},
              {"instances", config.instances},
              {"fault", config.fault == Fault::None ? "none" : "scaling"}};
}

// ---------------------------------------------------------------------------
// analyze

int cmd_analyze(const RunConfig& input_config, std::ostream& log) {
  validate(input_config);
  if (input_config.schemes.size() > 1) throw ConfigError("analyze takes at most one --scheme");

  RunConfig config = input_config;
  const SeqSample x = load_sequence(config);
  config.length = x.length();
  std::optional<LacunaryScheme> scheme;
  if (!config.schemes.empty()) scheme = load_scheme(config.schemes.front());
  const EpsilonGrid grid(config.eps_grid);
  prepare_out(config);

  json report = report_header(config);
  report["input"] = json{{"length", x.length()},
                         {"generator", x.recipe() ? io::to_json(*x.recipe()) : json(nullptr)}};
  try {
    const ConvergenceVerdict asc = asc_verdict(x, grid, config.policy);
    std::ostringstream csv;
    csv << io::kCurveHeader << '\n';
    for (double eps : grid.values()) {
      io::write_curve_rows(csv, density_curve(x, WitnessModulus(asc.n), eps, config.policy.growth), eps, asc.n);
    }
    write_text(config.out / "asc_curve.csv", csv.str());
    report["asc"] = io::to_json(asc);
    report["ac_sup_deviation"] = json{{"n", asc.n}, {"value", ac_sup_deviation(x, WitnessModulus(asc.n))}};
    log << verdict_line("ASC", asc) << '\n';

    if (scheme) {
      const ConvergenceVerdict theta = asc_theta_verdict(x, *scheme, grid, config.policy);
      std::ostringstream theta_csv;
      theta_csv << io::kCurveHeader << '\n';
      for (double eps : grid.values()) {
        io::write_curve_rows(theta_csv, density_curve(x, *scheme, WitnessModulus(theta.n), eps), eps, theta.n);
      }
      write_text(config.out / "asc_theta_curve.csv", theta_csv.str());

      const ConvergenceVerdict ac = ac_theta_verdict(x, *scheme, grid, config.policy);
      json means = json::array();
      for (std::size_t r = 1; r <= scheme->blocks_within(x.length()); ++r) {
        means.push_back(ac_theta_block_mean(x, *scheme, WitnessModulus(ac.n), r));
      }
      report["scheme"] = json{{"points", io::to_json(*scheme)["points"]},
                              {"blocks_within_sample", scheme->blocks_within(x.length())}};
      report["asc_theta"] = io::to_json(theta);
      report["ac_theta"] = json{{"verdict", io::to_json(ac)}, {"n", ac.n}, {"block_means", means}};
      report["ntheta_norm"] = ntheta_norm(x, *scheme);
      log << verdict_line("ASC_theta", theta) << '\n' << verdict_line("AC_theta", ac) << '\n';
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("analysis not possible with this configuration: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(std::string("scheme does not fit the sample: ") + e.what());
  }
  write_json(config.out / "report.json", report);
  return kOk;
}

// ---------------------------------------------------------------------------
// scheme

int cmd_scheme(const RunConfig& config, std::ostream& log) {
  validate(config);
  if (config.schemes.empty() || config.schemes.size() > 2) throw ConfigError("scheme takes one or two --scheme values");
  std::vector<LacunaryScheme> schemes;
  for (const auto& arg : config.schemes) schemes.push_back(load_scheme(arg));
  prepare_out(config);

  std::ostringstream csv;
  csv << "scheme,r,k_lower,k_upper,h,q\n";
  json entries = json::array();
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    const LacunaryScheme& scheme = schemes[s];
    for (std::size_t r = 1; r <= scheme.block_count(); ++r) {
      const Block b = scheme.block(r);
      csv << s + 1 << ',' << r << ',' << b.lower << ',' << b.upper << ',' << b.size() << ','
          << io::format_number(scheme.ratio(r)) << '\n';
    }
    json entry{{"points", io::to_json(scheme)["points"]},
               {"h", scheme.lengths()},
               {"q", scheme.ratios()},
               {"lacunarity_advisory", scheme.lacunarity_advisory()}};
    try {
      entry["ratio_stats"] = io::to_json(q_ratio_stats(scheme));
    } catch (const std::invalid_argument& e) {
      entry["ratio_stats"] = nullptr;
      entry["ratio_stats_note"] = e.what();
    }
    entries.push_back(std::move(entry));
    log << "scheme " << s + 1 << ": " << scheme.block_count() << " blocks"
        << (scheme.lacunarity_advisory() ? " (advisory: block lengths do not grow)" : "") << '\n';
  }
  write_text(config.out / "scheme.csv", csv.str());

  json report = report_header(config);
  report["schemes"] = entries;
  if (schemes.size() == 2) {
    json relation;
    if (is_refinement(schemes[0], schemes[1])) {
      relation = io::to_json(refinement_map(schemes[0], schemes[1]));
      relation["coarse"] = 1;
    } else if (is_refinement(schemes[1], schemes[0])) {
      relation = io::to_json(refinement_map(schemes[1], schemes[0]));
      relation["coarse"] = 2;
    } else {
      relation = io::to_json(block_intersections(schemes[0], schemes[1]));
      relation["coarse"] = nullptr;
    }
    log << "relation: " << relation["kind"].get<std::string>() << ", delta = " << relation["delta_exact"][0] << '/'
        << relation["delta_exact"][1] << '\n';
    report["relation"] = relation;
  }
  write_json(config.out / "scheme_report.json", report);
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

namespace {

// Blocks of the ratio-2 scheme used by the desk-scale experiments; the sample reaches k_R + 1.
constexpr std::size_t kExperimentBlocks = 16;

struct VerifyTally {
  std::size_t failures = 0;
  std::ostream& log;

  void record(bool ok, const std::string& label) {
    if (!ok) ++failures;
    log << (ok ? "ok    " : "FAIL  ") << label << '\n';
  }
};

json function_family_json(const std::vector<RealFunction>& fs) {
  json out = json::array();
  for (const auto& f : fs) out.push_back(io::to_json(f));
  return out;
}

}  // namespace

int cmd_verify(const RunConfig& input_config, std::ostream& log) {
  validate(input_config);
  if (!input_config.input.empty() || !input_config.schemes.empty()) {
    throw ConfigError("verify builds its own instances and takes no --input or --scheme");
  }
  RunConfig config = input_config;
  if (config.length == 0) config.length = kDefaultSuiteLength;
  const EpsilonGrid grid(config.eps_grid);
  const VerdictPolicy& policy = config.policy;
  prepare_out(config);

  VerifyTally tally{0, log};
  json report = report_header(config);

  // Exact property suites.
  json suites = json::array();
  const Property properties[] = {Property::ScalarClosure,         Property::SumClosure,    Property::MarkovStep,
                                 Property::RefinementAggregation, Property::DeltaTransfer, Property::Lac1Bound};
  for (std::size_t i = 0; i < std::size(properties); ++i) {
    SuiteOptions options;
    options.instances = config.instances;
    options.seed = config.seed + 0x9E3779B97F4A7C15ULL * (i + 1);
    options.max_length = config.length;
    options.fault = config.fault;
    const SuiteResult suite = run_property_suite(properties[i], options);
    tally.record(suite.passed(), "suite " + suite.name + ": " + std::to_string(suite.checks) + " checks, " +
                                     std::to_string(suite.failures) + " failures");
    suites.push_back(io::to_json(suite));
  }
  report["suites"] = suites;

  // Inclusion experiments on a ratio-2 scheme.
  const LacunaryScheme scheme = geometric_scheme(2.0, kExperimentBlocks, 1);
  const Index length = scheme.last() + 1;
  const std::vector<FamilyMember> family = standard_family(length);
  const std::vector<FamilyMember> periodic = gcd_periodic_family(length);
  json experiments = json::object();
  experiments["scheme"] = io::to_json(scheme);
  experiments["length"] = length;
  const std::pair<Hypothesis, const std::vector<FamilyMember>*> runs[] = {{Hypothesis::Lac1, &family},
                                                                          {Hypothesis::Lac2, &family},
                                                                          {Hypothesis::Corollary, &family},
                                                                          {Hypothesis::AcSubset, &periodic}};
  for (const auto& [hypothesis, members] : runs) {
    const InclusionExperiment exp = run_inclusion_experiment(hypothesis, *members, scheme, grid, policy);
    tally.record(!exp.refused && !exp.failed(), "experiment " + to_string(hypothesis) + ": " +
                                                    std::to_string(exp.supports) + " supports, " +
                                                    std::to_string(exp.contradictions) + " contradictions");
    experiments[to_string(hypothesis)] = io::to_json(exp);
  }

  // Deviation vanishes identically, so the block verdict must be exact.
  json zero_tail = json::array();
  bool all_zero = true;
  for (const auto& member : periodic) {
    const ConvergenceVerdict v = asc_theta_verdict(member.sample, scheme, grid, policy);
    bool zero = v.outcome == Outcome::ConvergentAtScale;
    for (const auto& t : v.tail) zero = zero && t.density == 0.0;
    all_zero = all_zero && zero;
    zero_tail.push_back(json{{"name", member.name}, {"verdict", io::to_json(v)}, {"exact_zero", zero}});
  }
  tally.record(all_zero, "gcd-periodic members have zero block tails");
  experiments["periodic_zero_tail"] = zero_tail;
  report["experiments"] = experiments;

  // Negative controls.
  json controls = json::object();
  {
    std::vector<double> identity_values(static_cast<std::size_t>(length));
    for (Index m = 1; m <= length; ++m) identity_values[static_cast<std::size_t>(m - 1)] = static_cast<double>(m);
    const ConvergenceVerdict v = asc_verdict(SeqSample(std::move(identity_values)), EpsilonGrid({1.0}), policy);
    tally.record(v.outcome == Outcome::NotConvergentAtScale, "control x_m = m is not convergent at eps = 1");
    controls["identity_sequence"] = io::to_json(v);

    const LacunaryScheme squares = polynomial_scheme(2, 99);
    const InclusionExperiment lac1 = run_inclusion_experiment(Hypothesis::Lac1, family, squares, grid, policy);
    tally.record(lac1.refused, "control lac1 refuses k_r = r^2");
    controls["lac1_squares"] = io::to_json(lac1);

    const LacunaryScheme factorial = factorial_scheme(12);
    const InclusionExperiment lac2 = run_inclusion_experiment(Hypothesis::Lac2, family, factorial, grid, policy);
    tally.record(lac2.refused, "control lac2 refuses k_r = (r+1)!");
    controls["lac2_factorial"] = io::to_json(lac2);
  }
  report["negative_controls"] = controls;

  // Continuity.
  json continuity = json::object();
  const std::vector<FamilyMember> cfamily = continuity_family(length);
  const RealFunction affine = fn::affine(2.0, 1.0);
  const RealFunction clamp = fn::clamp(0.0, 1.0);
  const RealFunction step = fn::step(0.5);
  json batteries = json::array();
  for (const auto& [label, f, expect_preserve] :
       {std::tuple{"affine", affine, true}, std::tuple{"clamp", clamp, true}, std::tuple{"step", step, false}}) {
    const ContinuityReport battery = continuity_battery(f, cfamily, scheme, grid, policy);
    const bool ok = expect_preserve ? battery.preserves() : battery.contradictions > 0;
    tally.record(ok, std::string("continuity ") + label + ": " + std::to_string(battery.contradictions) +
                         " contradictions" + (expect_preserve ? "" : " (expected)"));
    json entry = io::to_json(battery);
    entry["label"] = label;
    entry["expect_preserve"] = expect_preserve;
    batteries.push_back(std::move(entry));
  }
  continuity["batteries"] = batteries;

  json closures = json::array();
  for (const auto& [f, g] : {std::pair{affine, clamp}, std::pair{affine, step}}) {
    const CheckReport check = closure_checks(f, g, cfamily, scheme, grid, policy);
    tally.record(check.passed(), "closure " + check.instance["f"]["kind"].get<std::string>() + " with " +
                                     check.instance["g"]["kind"].get<std::string>());
    closures.push_back(io::to_json(check));
  }
  continuity["closures"] = closures;

  // f_N with N = 2^j: dyadic perturbations converging uniformly on bounded sets.
  constexpr int kLimitTerms = 25;
  std::vector<RealFunction> shifted, quadratic, clamped;
  for (int j = 0; j < kLimitTerms; ++j) {
    const double inv = std::ldexp(1.0, -j);
    shifted.push_back(fn::affine(1.0, inv));
    quadratic.push_back(fn::polynomial({0.0, inv, 1.0}));
    clamped.push_back(fn::compose(fn::clamp(0.0, 1.0), fn::affine(1.0, inv)));
  }
  const std::vector<double> probe{-1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 2.0, 4.0};
  const std::tuple<const char*, const std::vector<RealFunction>*, RealFunction> limits[] = {
      {"shift", &shifted, fn::identity()},
      {"quadratic", &quadratic, fn::polynomial({0.0, 0.0, 1.0})},
      {"clamped_shift", &clamped, fn::clamp(0.0, 1.0)}};
  json uniform = json::array();
  for (const auto& [label, f_list, f] : limits) {
    std::size_t checked = 0;
    std::size_t failed = 0;
    json reports = json::array();
    for (const auto& member : cfamily) {
      const ConvergenceVerdict v = asc_theta_verdict(member.sample, scheme, grid, policy);
      for (double eps : grid.values()) {
        const CheckReport check =
            uniform_limit_check(*f_list, f, member.sample, scheme, WitnessModulus(v.n), eps, probe);
        ++checked;
        if (!check.passed()) {
          ++failed;
          reports.push_back(io::to_json(check));
        }
      }
    }
    tally.record(failed == 0, std::string("uniform limit ") + label + ": " + std::to_string(checked) + " checks, " +
                                  std::to_string(failed) + " not passed");
    uniform.push_back(json{{"label", label},
                           {"f", io::to_json(f)},
                           {"f_list", function_family_json(*f_list)},
                           {"checks", checked},
                           {"not_passed", failed},
                           {"reports", reports}});
  }
  continuity["uniform_limits"] = uniform;
  report["continuity"] = continuity;

  report["summary"] = json{{"failures", tally.failures}, {"passed", tally.failures == 0}};
  write_json(config.out / "verify_report.json", report);
  log << (tally.failures == 0 ? "verify: all checks passed" : "verify: " + std::to_string(tally.failures) + " failed")
      << '\n';
  return tally.failures == 0 ? kOk : kVerificationFailure;
}

// ---------------------------------------------------------------------------
// argument parsing

namespace {

void add_common_options(CLI::App& sub, RunConfig& config, std::string& fault) {
  sub.add_option("--length", config.length, "Sample length T (0 = command default)");
  sub.add_option("--eps-grid", config.eps_grid, "Comma-separated epsilon grid")->delimiter(',');
  sub.add_option("--n-max", config.policy.n_max, "Largest witness modulus searched");
  sub.add_option("--tail-window", config.policy.tail_window, "Curve points averaged for tail densities");
  sub.add_option("--tol", config.policy.tol, "Tail density accepted as convergent");
  sub.add_option("--tol-hi", config.policy.tol_hi, "Tail density treated as divergent");
  sub.add_option("--growth", config.policy.growth, "Prefix checkpoint growth factor");
  sub.add_option("--out", config.out, "Output directory");
  sub.add_option("--seed", config.seed, "Random seed");
  sub.add_option("--input", config.input, "Sequence: generator JSON (file or inline) or CSV with one value per line");
  sub.add_option("--scheme", config.schemes, "Scheme JSON (file or inline); repeatable")
      ->allow_extra_args(false);
  sub.add_option("--instances", config.instances, "Instances per property suite");
  sub.add_option("--inject-fault", fault, "Deliberate fault for harness checks")
      ->check(CLI::IsMember({"none", "scaling"}));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-scale statistical convergence diagnostics for gcd-indexed sequences", "gcdstat"};
  app.require_subcommand(1);
  RunConfig config;
  std::string fault = "none";
  CLI::App* analyze = app.add_subcommand("analyze", "Density curves and verdicts for one sequence");
  CLI::App* scheme = app.add_subcommand("scheme", "Block lengths, ratios and relations of lacunary schemes");
  CLI::App* verify = app.add_subcommand("verify", "Property suites and inclusion and continuity experiments");
  for (CLI::App* sub : {analyze, scheme, verify}) add_common_options(*sub, config, fault);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }
  config.fault = fault == "scaling" ? Fault::MutatedScalingEpsilon : Fault::None;
  std::sort(config.eps_grid.begin(), config.eps_grid.end(), std::greater<>());
  config.eps_grid.erase(std::unique(config.eps_grid.begin(), config.eps_grid.end()), config.eps_grid.end());

  try {
    if (analyze->parsed()) {
      config.command = Command::Analyze;
      return cmd_analyze(config, out);
    }
    if (scheme->parsed()) {
      config.command = Command::Scheme;
      return cmd_scheme(config, out);
    }
    config.command = Command::Verify;
    return cmd_verify(config, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace gcdstat::cli
