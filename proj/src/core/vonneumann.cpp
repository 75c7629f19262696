#include "core/vonneumann.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "core/operators.hpp"
#include "core/parallel.hpp"

namespace commsim {

namespace {

constexpr double kExactStationaryTolerance = 1e-9;

double trace_tolerance(const std::vector<EntryProvenance>& provenance,
                       Eigen::Index dim) {
  double diag_var = 0.0;
  for (Eigen::Index n = 0; n < dim; ++n) {
    const double se = provenance[n * dim + n].std_error;
    diag_var += se * se;
  }
  return std::max(1e-10, 5.0 * std::sqrt(diag_var));
}

Matrix complete_basis(const Vector& v) {
  const Eigen::Index dim = v.size();
  Matrix basis(dim, dim);
  basis.col(0) = v / v.norm();
  Eigen::Index filled = 1;
  for (Eigen::Index e = 0; e < dim && filled < dim; ++e) {
    Vector candidate = Vector::Unit(dim, e);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index c = 0; c < filled; ++c) {
        candidate -= basis.col(c) * basis.col(c).dot(candidate);
      }
    }
    if (candidate.norm() > 1e-7) {
      basis.col(filled++) = candidate / candidate.norm();
    }
  }
  if (filled != dim) {
    throw NumericError("basis_completion_unitary: completion failed");
  }
  return basis;
}

std::string candidate_label(const StateVector& candidate, std::size_t index) {
  const Vector& amps = candidate.amplitudes();
  for (Eigen::Index n = 0; n < amps.size(); ++n) {
    if (std::abs(amps[n]) > 1.0 - 1e-12) return "|" + std::to_string(n) + ">";
  }
  return "candidate " + std::to_string(index);
}

}  // namespace

RateMatrix::RateMatrix(Matrix values, std::vector<EntryProvenance> provenance)
    : values_(std::move(values)), provenance_(std::move(provenance)) {
  const Eigen::Index dim = values_.rows();
  if (values_.cols() != dim ||
      provenance_.size() != static_cast<std::size_t>(dim * dim)) {
    throw InvalidArgument("RateMatrix: shape/provenance mismatch");
  }
  if (!values_.allFinite()) throw NumericError("RateMatrix: non-finite entry");

  const double hermitian_tol = std::max(1e-10, 5.0 * max_std_error());
  const double asymmetry = (values_ - values_.adjoint()).cwiseAbs().maxCoeff();
  if (asymmetry > hermitian_tol) {
    throw NumericError("RateMatrix: not Hermitian within tolerance (defect " +
                       std::to_string(asymmetry) + ")");
  }
  const double trace_mag = std::abs(values_.trace());
  if (trace_mag > trace_tolerance(provenance_, dim)) {
    throw NumericError("RateMatrix: trace " + std::to_string(trace_mag) +
                       " beyond tolerance");
  }
}

double RateMatrix::max_std_error() const {
  double worst = 0.0;
  for (const auto& p : provenance_) worst = std::max(worst, p.std_error);
  return worst;
}

Matrix translation_operator(int num_qubits, int power) {
  const Eigen::Index dim = dim_for_qubits(num_qubits);
  if (power < 1 || power > dim - 1) {
    throw InvalidArgument("translation_operator: power " +
                          std::to_string(power) + " outside [1, " +
                          std::to_string(dim - 1) + "]");
  }
  Matrix t = Matrix::Zero(dim, dim);
  for (Eigen::Index n = 0; n < dim; ++n) {
    t((n + power) % dim, n) = 1.0;
  }
  return t;
}

Matrix basis_completion_unitary(const Vector& from, const Vector& to) {
  if (from.size() != to.size() || from.size() < 1) {
    throw DimensionMismatch("basis_completion_unitary: size mismatch");
  }
  if (from.norm() < 1e-14 || to.norm() < 1e-14) {
    throw InvalidArgument("basis_completion_unitary: zero vector");
  }
  return complete_basis(to) * complete_basis(from).adjoint();
}

EstimationResult diagonal_rate(const RhoPrep& rho, Eigen::Index n,
                               const WeightedPauliSum& m_sum,
                               const EstimationMode& mode) {
  const int L = rho.psi0.num_qubits();
  return commutator_expectation(rho, StateVector::basis(L, n), m_sum, mode);
}

EstimationResult offdiagonal_rate(const RhoPrep& rho, Eigen::Index n, int p,
                                  const WeightedPauliSum& m_sum,
                                  const EstimationMode& mode) {
  const int L = rho.psi0.num_qubits();
  return commutator_element(rho, StateVector::basis(L, n),
                            translation_operator(L, p), m_sum, mode);
}

RateMatrix rate_matrix(const RhoPrep& rho, const WeightedPauliSum& m_sum,
                       const EstimationMode& mode) {
  const Eigen::Index dim = dim_for_qubits(rho.psi0.num_qubits());
  Matrix values(dim, dim);
  std::vector<EntryProvenance> provenance(dim * dim);

  parallel_for(dim * dim, [&](std::int64_t task) {
    const Eigen::Index n = task / dim;
    const int p = static_cast<int>(task % dim);
    const EstimationMode entry_mode = mode.child(static_cast<std::uint64_t>(task));
    if (p == 0) {
      const EstimationResult r = diagonal_rate(rho, n, m_sum, entry_mode);
      values(n, n) = r.value;
      provenance[n * dim + n] = {{std::numbers::pi / 2.0},
                                 0,
                                 mode.is_sampled(),
                                 r.std_error};
    } else {
      const Eigen::Index m = (n + p) % dim;
      const EstimationResult r = offdiagonal_rate(rho, n, p, m_sum, entry_mode);
      values(n, m) = r.value;
      provenance[n * dim + m] = {{0.0, std::numbers::pi / 2.0},
                                 p,
                                 mode.is_sampled(),
                                 r.std_error};
    }
  });

  return RateMatrix(std::move(values), std::move(provenance));
}

std::vector<ScanReport> stationary_scan(const RhoPrep& rho,
                                        const std::vector<StateVector>& phi_candidates,
                                        const WeightedPauliSum& m_sum,
                                        const std::vector<double>& time_grid,
                                        const EstimationMode& mode,
                                        double tolerance) {
  if (phi_candidates.empty() || time_grid.empty()) {
    throw InvalidArgument("stationary_scan: empty candidate list or grid");
  }
  const auto* he = std::get_if<HamiltonianEvolution>(&rho.evolution);
  if (he == nullptr) {
    throw InvalidArgument("stationary_scan: needs Hamiltonian-based evolution");
  }
  const Matrix hamiltonian = he->hamiltonian;
  const std::size_t num_times = time_grid.size();

  std::vector<ScanReport> reports(phi_candidates.size());
  for (std::size_t c = 0; c < phi_candidates.size(); ++c) {
    reports[c].reference_label = candidate_label(phi_candidates[c], c);
    reports[c].time_grid = time_grid;
    reports[c].values.resize(num_times);
    reports[c].std_errors.resize(num_times);
  }

  parallel_for(static_cast<std::int64_t>(phi_candidates.size() * num_times),
               [&](std::int64_t task) {
                 const std::size_t c = task / num_times;
                 const std::size_t i = task % num_times;
                 const RhoPrep at_time{
                     rho.psi0, HamiltonianEvolution{hamiltonian, time_grid[i]}};
                 const EstimationResult r = commutator_expectation(
                     at_time, phi_candidates[c], m_sum,
                     mode.child(static_cast<std::uint64_t>(task)));
                 reports[c].values[i] = r.value.real();
                 reports[c].std_errors[i] = r.std_error;
               });

  for (auto& report : reports) {
    bool stationary = true;
    for (std::size_t i = 0; i < num_times; ++i) {
      double bound = tolerance > 0 ? tolerance : kExactStationaryTolerance;
      if (mode.is_sampled()) {
        bound = std::max(bound, 5.0 * report.std_errors[i]);
      }
      if (std::abs(report.values[i]) > bound) {
        stationary = false;
        break;
      }
    }
    report.is_stationary = stationary;
  }
  return reports;
}

std::pair<double, double> extract_frequency(const ScanReport& report) {
  if (report.is_stationary) {
    throw Error("extract_frequency: no oscillation (stationary report)");
  }
  const std::size_t n = report.values.size();
  if (n < 8) {
    throw InvalidArgument("extract_frequency: need at least 8 grid points");
  }
  const double dt = report.time_grid[1] - report.time_grid[0];
  if (!(dt > 0)) throw InvalidArgument("extract_frequency: grid not increasing");
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double step = report.time_grid[i + 1] - report.time_grid[i];
    if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
      throw InvalidArgument("extract_frequency: time grid must be uniform");
    }
  }

  double mean = 0.0;
  for (double v : report.values) mean += v;
  mean /= static_cast<double>(n);
  double peak_amp = 0.0;
  for (double v : report.values) peak_amp = std::max(peak_amp, std::abs(v - mean));
  if (peak_amp <= 1e-12) {
    throw Error("extract_frequency: no oscillation (constant signal)");
  }

  // Magnitude spectrum over k = 0 .. n/2.
  const std::size_t half = n / 2;
  std::vector<double> magnitude(half + 1, 0.0);
  for (std::size_t k = 0; k <= half; ++k) {
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) *
                           static_cast<double>(k) / static_cast<double>(n);
      acc += (report.values[j] - mean) * std::exp(Complex(0.0, angle));
    }
    magnitude[k] = std::abs(acc);
  }

  std::size_t peak = 1;
  for (std::size_t k = 2; k <= half; ++k) {
    if (magnitude[k] > magnitude[peak]) peak = k;
  }

  double shift = 0.0;
  if (peak > 1 && peak < half) {
    const double alpha = magnitude[peak - 1];
    const double beta = magnitude[peak];
    const double gamma = magnitude[peak + 1];
    const double denom = alpha - 2.0 * beta + gamma;
    if (std::abs(denom) > 1e-300) {
      shift = std::clamp(0.5 * (alpha - gamma) / denom, -0.5, 0.5);
    }
  }

  const double bin = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
  return {(static_cast<double>(peak) + shift) * bin, bin};
}

}  // namespace commsim
