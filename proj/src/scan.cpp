#include "corostab/scan.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <thread>

#include "corostab/errors.hpp"
#include "corostab/quadforms.hpp"
#include "corostab/random.hpp"

namespace corostab {

int default_jobs() {
  if (const char* env = std::getenv("COROSTAB_JOBS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

double relative(double a, double b) { return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b))); }

OracleStats oracle_stats(const MaterialLaw& law, const std::vector<Vector3>& states, const AuditReport& audit,
                         std::uint64_t seed) {
  OracleStats stats;
  stats.sampling_gap_min = std::numeric_limits<double>::infinity();
  Rng rng(seed ^ 0x5DEECE66DULL);
  for (const Vector3& x : states) {
    const DeformationState state = state_from_log_stretches(x);
    const QuadFormBlocks blocks = quad_form_blocks(law, state, StressFlavor::Cauchy);
    const Tensor3 lambda_route = q1_lambda_route(law, state, StressFlavor::Cauchy);
    stats.q1_route_max = std::max(stats.q1_route_max, (blocks.q1_sym - lambda_route).norm() /
                                                          (1.0 + lambda_route.norm()));
    const SymmetricTensor3 edot = rng.unit_symmetric();
    const double block = full_form_value(blocks, edot_components(state, edot));
    const double direct = tensorial_form_value(law, state, edot, StressFlavor::Cauchy);
    stats.form_route_max = std::max(stats.form_route_max, relative(block, direct));
    ++stats.samples;
  }
  for (const StateRecord& r : audit.records) {
    for (const FlavorRecord& f : r.flavors) {
      stats.sampling_gap_min = std::min(stats.sampling_gap_min, f.csp_sampled - f.csp_exact);
    }
  }
  if (audit.records.empty()) stats.sampling_gap_min = 0.0;
  return stats;
}

}  // namespace

ScanResult run_scan(const ScanConfig& config, int jobs) {
  const MaterialLaw law = scan_material(config);
  const std::vector<Vector3> states = scan_states(config);

  AuditOptions options;
  options.margin = config.margin;
  options.definiteness = config.definiteness;
  options.n_directions = config.directions;
  options.seed = config.seed;
  options.jobs = jobs;
  options.flavors = config.flavors;

  ScanResult result;
  result.audit = equivalence_audit(law, states, options);
  result.oracles = oracle_stats(law, states, result.audit, config.seed);
  result.body = config.format == OutputFormat::Json
                    ? dump_json(report_to_json(config, result.audit, result.oracles))
                    : report_to_csv(result.audit);
  result.exit_code = result.audit.consistent() ? kExitConsistent : kExitViolation;
  return result;
}

void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.close();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("error writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move report into place at " + path.string());
  }
}

}  // namespace corostab
