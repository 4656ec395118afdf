// Command-line front end: eval, scan, verify, check-material.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corostab/config.hpp"
#include "corostab/errors.hpp"
#include "corostab/quadforms.hpp"
#include "corostab/scan.hpp"
#include "corostab/stability.hpp"
#include "corostab/stress.hpp"
#include "corostab/verify.hpp"

using namespace corostab;

namespace {

ParameterMap parse_params(const std::vector<std::string>& items) {
  ParameterMap out;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw SchemaError("--param expects name=value, got '" + item + "'");
    out[item.substr(0, eq)] = parse_number(item.substr(eq + 1), 0);
  }
  return out;
}

Vector3 parse_triple(const std::string& text, const char* what) {
  Vector3 v;
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const auto comma = text.find(',', start);
    if ((i < 2) == (comma == std::string::npos)) {
      throw SchemaError(std::string(what) + " expects three comma-separated numbers");
    }
    v(i) = parse_number(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start), 0);
    start = comma + 1;
  }
  return v;
}

void print_vector(const char* label, const Vector3& v) {
  std::printf("%-22s %.10g %.10g %.10g\n", label, v(0), v(1), v(2));
}

int cmd_eval(const std::string& builtin, const std::string& material, const std::vector<std::string>& params,
             const std::string& stretch, const std::string& log_stretch) {
  const MaterialLaw law = material.empty() ? load_material(builtin, parse_params(params))
                                           : load_material(std::filesystem::path(material));
  for (const std::string& w : law_warnings(law)) std::fprintf(stderr, "warning: %s\n", w.c_str());

  Vector3 x;
  if (!log_stretch.empty()) {
    x = parse_triple(log_stretch, "--log-stretch");
  } else {
    const Vector3 l = parse_triple(stretch, "--stretch");
    if ((l.array() <= 0.0).any()) throw SchemaError("stretches must be positive");
    x = l.array().log();
  }
  const DeformationState state = state_from_log_stretches(x);
  const StressState stress = cauchy_stress(law, state);
  std::printf("law                    %s\n", law_name(law).c_str());
  print_vector("stretches", state.stretches);
  print_vector("log-stretches", state.log_stretches);
  std::printf("%-22s %.10g\n", "J", state.J);
  print_vector("principal sigma", stress.principal_sigma);
  print_vector("principal tau", stress.principal_tau);
  const BakerEricksenCheck be = check_be(stress.principal_sigma, state.stretches);
  std::printf("%-22s %s", "BE+", be.pass ? "pass" : "fail");
  if (be.margin) std::printf(" (margin %.10g)", *be.margin);
  std::printf("\n");
  for (StressFlavor f : {StressFlavor::Cauchy, StressFlavor::Kirchhoff}) {
    const LambdaMatrix lm = lambda_matrix(law, state.log_stretches, f);
    const CspResult csp = csp_sampled(law, state, 200, 1, f);
    const std::string tag = std::string("[") + to_string(f) + "]";
    print_vector(("Lambda eigenvalues " + tag).c_str(), lm.eigenvalues);
    std::printf("%-22s %.10g (sampled %.10g)\n", ("CSP minimum " + tag).c_str(), csp.exact_minimum, csp.minimum);
    std::printf("%-22s %s\n", ("TSTS-M++ " + tag).c_str(),
                check_tstsm_pp(law, state.log_stretches, f).positive ? "pass" : "fail");
  }
  return 0;
}

int cmd_scan(const std::string& config_path, const std::string& out, const std::string& format, int jobs) {
  ScanConfig config = load_scan_config(config_path);
  if (!format.empty()) config.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  if (!out.empty()) config.output = out;
  const ScanResult result = run_scan(config, jobs > 0 ? jobs : default_jobs());
  if (config.output) {
    write_file_atomically(*config.output, result.body);
  } else {
    std::fwrite(result.body.data(), 1, result.body.size(), stdout);
  }
  for (const FlavorSummary& s : result.audit.summaries) {
    std::fprintf(stderr, "[%s] pass %zu fail %zu marginal %zu inconsistent %zu implication violations %zu\n",
                 to_string(s.flavor), s.pass, s.fail, s.marginal, s.inconsistent, s.implication_violations);
  }
  return result.exit_code;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int samples, bool mutate) {
  VerifyOptions options;
  options.suite = suite;
  options.seed = seed;
  options.samples = samples;
  options.mutate_q2_sign = mutate;
  const VerifySummary summary = run_verify(options);
  for (const SuiteResult& s : summary.suites) {
    for (const CheckResult& c : s.checks) {
      std::printf("%s %-10s %s: worst %.3g (tol %.3g, n=%zu)%s%s\n", c.passed ? "PASS" : "FAIL", s.name.c_str(),
                  c.name.c_str(), c.worst, c.tolerance, c.samples, c.detail.empty() ? "" : "; ", c.detail.c_str());
    }
  }
  if (summary.kirchhoff) {
    std::printf("kirchhoff factor: <D^ZJ tau, D> = %s * Q_tau(Edot)\n", to_string(summary.kirchhoff->factor));
  }
  std::printf("%s\n", summary.passed() ? "all checks passed" : "some checks FAILED");
  return summary.passed() ? 0 : kExitViolation;
}

int cmd_check_material(const std::string& path) {
  const MaterialLaw law = load_material(std::filesystem::path(path));
  for (const std::string& w : law_warnings(law)) std::printf("warning: %s\n", w.c_str());
  std::printf("%s: ok (%s, %s)\n", path.c_str(), law_name(law).c_str(),
              is_hyperelastic(law) ? "hyperelastic" : "Cauchy-elastic");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corotational stability and true-stress-true-strain monotonicity checks"};
  app.require_subcommand(1);

  std::string builtin = "hencky", material, stretch = "1,1,1", log_stretch;
  std::vector<std::string> params;
  auto* eval = app.add_subcommand("eval", "Stresses, Lambda eigenvalues and verdicts at one state");
  eval->add_option("--law", builtin, "Built-in law: hencky, exp-hencky, cauchy-nonhyper");
  eval->add_option("--material", material, "Material file instead of --law")->check(CLI::ExistingFile);
  eval->add_option("--param", params, "Parameter name=value (repeatable)");
  auto* stretch_opt = eval->add_option("--stretch", stretch, "Principal stretches a,b,c");
  eval->add_option("--log-stretch", log_stretch, "Log-stretches x1,x2,x3")->excludes(stretch_opt);

  std::string config_path, out, format;
  int jobs = 0;
  auto* scan = app.add_subcommand("scan", "Equivalence audit over a grid or random states");
  scan->add_option("--config", config_path, "Scan config file")->required()->check(CLI::ExistingFile);
  scan->add_option("--out", out, "Report path (default: config [output] path, else stdout)");
  scan->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  scan->add_option("--jobs", jobs, "Worker threads (default: COROSTAB_JOBS or hardware)")->check(CLI::PositiveNumber);

  std::string suite = "all";
  std::uint64_t seed = VerifyOptions{}.seed;
  int samples = VerifyOptions{}.samples;
  bool mutate = false;
  auto* verify = app.add_subcommand("verify", "Run the cross-route oracle suites");
  verify->add_option("--suite", suite, "all, zj, quadform, monotonicity or gamma")
      ->check(CLI::IsMember({"all", "zj", "quadform", "monotonicity", "gamma"}));
  verify->add_option("--seed", seed, "Random seed");
  verify->add_option("--samples", samples, "Random states per law in the identity checks")->check(CLI::Range(10, 100000));
  verify->add_flag("--mutate-q2-sign", mutate, "Flip the sign of the off-diagonal block (the checks must fail)");

  std::string material_path;
  auto* check = app.add_subcommand("check-material", "Parse and validate a material file");
  check->add_option("path", material_path, "Material file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    if (*eval) return cmd_eval(builtin, material, params, stretch, log_stretch);
    if (*scan) return cmd_scan(config_path, out, format, jobs);
    if (*verify) return cmd_verify(suite, seed, samples, mutate);
    if (*check) return cmd_check_material(material_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
