#include "corostab/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "corostab/errors.hpp"
#include "corostab/random.hpp"
#include "corostab/stress.hpp"

namespace corostab {

SymmetricTensor3 InducedIsotropicMap::operator()(const SymmetricTensor3& s) const {
  const SpectralData sd = spectral_decompose(s);
  const Vector3 values = f(sd.values);
  return SymmetricTensor3(sd.vectors * values.asDiagonal() * sd.vectors.transpose());
}

Vector3 principal_stress(const MaterialLaw& law, const Vector3& x, StressFlavor flavor) {
  const Vector3 tau = principal_kirchhoff(law, x);
  return flavor == StressFlavor::Kirchhoff ? tau : Vector3(std::exp(-x.sum()) * tau);
}

InducedIsotropicMap induced_stress_map(const MaterialLaw& law, StressFlavor flavor) {
  return {[law, flavor](const Vector3& x) { return principal_stress(law, x, flavor); }};
}

DefinitenessCheck check_tstsm_pp(const MaterialLaw& law, const Vector3& x, StressFlavor flavor,
                                 double tolerance_factor) {
  const LambdaMatrix lm = lambda_matrix(law, x, flavor);
  return {lm.min_eigenvalue, lm.min_eigenvalue > tolerance_factor * lm.matrix.norm()};
}

BakerEricksenCheck check_be(const Vector3& principal, const Vector3& stretches, double exempt_gap) {
  BakerEricksenCheck out;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const double dl = stretches(i) - stretches(j);
      if (std::abs(dl) <= exempt_gap * std::max(std::abs(stretches(i)), std::abs(stretches(j)))) continue;
      const double product = (principal(i) - principal(j)) * dl;
      if (!out.margin || product < *out.margin) {
        out.margin = product;
        out.worst_pair = std::array<int, 2>{i, j};
      }
    }
  }
  out.pass = !out.margin || *out.margin > 0.0;
  return out;
}

double check_tstsm_pair(const MaterialLaw& law, const Vector3& xa, const Vector3& xb, StressFlavor flavor,
                        const Tensor3& frame_a, const Tensor3& frame_b) {
  if (xa == xb) throw Error("check_tstsm_pair: the two log-stretch points coincide");
  const SymmetricTensor3 a(frame_a * xa.asDiagonal() * frame_a.transpose());
  const SymmetricTensor3 b(frame_b * xb.asDiagonal() * frame_b.transpose());
  const InducedIsotropicMap map = induced_stress_map(law, flavor);
  return frobenius((map(a) - map(b)).matrix(), (a - b).matrix());
}

Quadrature gauss_legendre(int n) {
  if (n < 1) throw Error("gauss_legendre: need at least one node");
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    q.nodes[i] = 0.5 * (1.0 - z);
    q.weights[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  return q;
}

double line_integral_monotonicity(const MaterialLaw& law, const Vector3& xa, const Vector3& xb, int n_nodes,
                                  StressFlavor flavor) {
  if (n_nodes < 8) throw Error("line_integral_monotonicity: need at least 8 nodes");
  if (xa == xb) throw Error("line_integral_monotonicity: the two log-stretch points coincide");
  const Vector3 d = xa - xb;
  const Quadrature q = gauss_legendre(n_nodes);
  double total = 0.0;
  for (int k = 0; k < n_nodes; ++k) {
    const LambdaMatrix lm = lambda_matrix(law, xb + q.nodes[k] * d, flavor);
    total += q.weights[k] * d.dot(lm.matrix * d);
  }
  return total;
}

namespace {

Vector6 stretch_weights(const Vector3& l) {
  Vector6 m;
  m << l(0) * l(0), l(1) * l(1), l(2) * l(2), l(1) * l(2), l(0) * l(2), l(0) * l(1);
  return m;
}

Verdict classify(double value, double margin) {
  if (value > margin) return Verdict::Pass;
  if (value < -margin) return Verdict::Fail;
  return Verdict::Marginal;
}

}  // namespace

Matrix6 csp_matrix(const QuadFormBlocks& blocks) {
  const Vector6 m = stretch_weights(blocks.stretches);
  Matrix6 p = m.asDiagonal() * blocks.six_by_six() * m.asDiagonal();
  if (blocks.stress_flavor == StressFlavor::Cauchy) p /= blocks.J;
  return p;
}

Tensor3 spatial_axes(const DeformationState& state) {
  return state.spatial_vectors() * state.stretches.cwiseInverse().asDiagonal();
}

double csp_pairing_quadform(const QuadFormBlocks& blocks, const DeformationState& state, const SymmetricTensor3& d) {
  const SymmetricTensor3 edot(state.F.transpose() * d.matrix() * state.F);
  const double q = full_form_value(blocks, edot_components(state, edot));
  return blocks.stress_flavor == StressFlavor::Cauchy ? q / blocks.J : q;
}

CspResult csp_sampled(const MaterialLaw& law, const DeformationState& state, int n_directions, std::uint64_t seed,
                      StressFlavor flavor) {
  if (n_directions < 50) throw Error("csp_sampled: need at least 50 directions");
  const QuadFormBlocks blocks = quad_form_blocks(law, state, flavor);
  CspResult out;
  out.minimum = std::numeric_limits<double>::infinity();
  auto consider = [&](const SymmetricTensor3& d) {
    const double value = csp_pairing_quadform(blocks, state, d);
    ++out.directions;
    if (value < out.minimum) {
      out.minimum = value;
      out.argmin = d;
    }
  };

  Rng rng(seed);
  for (int k = 0; k < n_directions; ++k) consider(rng.unit_symmetric());
  for (const Tensor3& e : sym_basis()) consider(SymmetricTensor3(e));

  const Eigen::SelfAdjointEigenSolver<Matrix6> es(csp_matrix(blocks));
  out.exact_minimum = es.eigenvalues()(0);
  const Tensor3 n = spatial_axes(state);
  consider(SymmetricTensor3(n * from_sym_coordinates(es.eigenvectors().col(0)) * n.transpose()));

  out.block_minimum = Eigen::SelfAdjointEigenSolver<Matrix6>(blocks.six_by_six(), Eigen::EigenvaluesOnly)
                          .eigenvalues()(0);
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Marginal:
      return "marginal";
  }
  return "?";
}

bool AuditReport::consistent() const {
  return std::all_of(summaries.begin(), summaries.end(), [](const FlavorSummary& s) {
    return s.inconsistent == 0 && s.sampling_mismatches == 0 && s.implication_violations == 0;
  });
}

namespace {

StateRecord audit_state(const MaterialLaw& law, const Vector3& x, std::size_t index, const AuditOptions& opt) {
  StateRecord r;
  r.index = index;
  r.x = x;
  const DeformationState state = state_from_log_stretches(x);
  r.stretches = x.array().exp();  // in the order of x, like the principal stresses
  r.J = state.J;
  r.tau = principal_kirchhoff(law, x);
  r.sigma = r.tau / r.J;
  r.be = check_be(r.sigma, r.stretches);

  const std::uint64_t seed = opt.seed * 0x9E3779B97F4A7C15ULL + index;
  for (const StressFlavor flavor : opt.flavors) {
    FlavorRecord f;
    f.flavor = flavor;
    const LambdaMatrix lm = lambda_matrix(law, x, flavor);
    f.lambda_min = lm.min_eigenvalue;
    const CspResult csp = csp_sampled(law, state, opt.n_directions, seed, flavor);
    f.csp_exact = csp.exact_minimum;
    f.csp_sampled = csp.minimum;
    f.block_min = csp.block_minimum;
    f.lambda_verdict = classify(f.lambda_min, std::max(opt.margin, opt.definiteness * lm.matrix.norm()));
    f.csp_verdict = classify(f.csp_exact, opt.margin);
    if (f.lambda_verdict == Verdict::Marginal || f.csp_verdict == Verdict::Marginal) {
      f.verdict = Verdict::Marginal;
    } else {
      f.consistent = f.lambda_verdict == f.csp_verdict;
      f.verdict = f.consistent ? f.lambda_verdict : Verdict::Marginal;
    }
    f.sampling_consistent = f.csp_sampled >= f.csp_exact - 1e-9 * (1.0 + std::abs(f.csp_exact));
    f.implication_ok = !(f.lambda_verdict == Verdict::Pass && !r.be.pass);
    r.flavors.push_back(f);
  }
  return r;
}

}  // namespace

AuditReport equivalence_audit(const MaterialLaw& law, const std::vector<Vector3>& states,
                              const AuditOptions& options) {
  AuditReport report;
  report.records.resize(states.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < states.size(); i = next++) {
      try {
        report.records[i] = audit_state(law, states[i], i, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = states.size();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(states.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t k = 0; k < options.flavors.size(); ++k) {
    FlavorSummary s;
    s.flavor = options.flavors[k];
    double worst = std::numeric_limits<double>::infinity();
    for (const StateRecord& r : report.records) {
      const FlavorRecord& f = r.flavors[k];
      switch (f.verdict) {
        case Verdict::Pass:
          ++s.pass;
          break;
        case Verdict::Fail:
          ++s.fail;
          break;
        case Verdict::Marginal:
          ++s.marginal;
          break;
      }
      s.inconsistent += !f.consistent;
      s.sampling_mismatches += !f.sampling_consistent;
      s.implication_violations += !f.implication_ok;
      if (f.lambda_min < worst) {
        worst = f.lambda_min;
        s.worst_state = r.index;
      }
    }
    report.summaries.push_back(s);
  }
  for (const StateRecord& r : report.records) report.be_failures += !r.be.pass;
  return report;
}

}  // namespace corostab
