#include "commsim.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/estimator.hpp"
#include "core/lindblad.hpp"
#include "core/operators.hpp"
#include "core/pauli.hpp"
#include "core/vonneumann.hpp"

struct commsim_state {
  commsim::StateVector value;
};
struct commsim_operator {
  commsim::Matrix value;
};
struct commsim_pauli_sum {
  commsim::WeightedPauliSum value;
};
struct commsim_channel {
  commsim::LindbladChannel value;
};

namespace {

thread_local std::string g_last_error;

commsim_status fail(commsim_status code, const char* message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
commsim_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return COMMSIM_OK;
  } catch (const commsim::ParseError& e) {
    return fail(COMMSIM_ERROR_PARSE, e.what());
  } catch (const commsim::DimensionMismatch& e) {
    return fail(COMMSIM_ERROR_DIMENSION_MISMATCH, e.what());
  } catch (const commsim::InvalidArgument& e) {
    return fail(COMMSIM_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const commsim::NumericError& e) {
    return fail(COMMSIM_ERROR_NUMERIC, e.what());
  } catch (const commsim::Error& e) {
    return fail(COMMSIM_ERROR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return fail(COMMSIM_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(COMMSIM_ERROR_INTERNAL, "unknown error");
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw commsim::InvalidArgument(message);
}

commsim::Vector vector_from_interleaved(const double* data, Eigen::Index dim) {
  commsim::Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    v[i] = commsim::Complex(data[2 * i], data[2 * i + 1]);
  }
  return v;
}

void vector_to_interleaved(const commsim::Vector& v, double* out) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[2 * i] = v[i].real();
    out[2 * i + 1] = v[i].imag();
  }
}

commsim::Matrix matrix_from_interleaved(const double* data, Eigen::Index dim) {
  commsim::Matrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      const Eigen::Index k = 2 * (r * dim + c);
      m(r, c) = commsim::Complex(data[k], data[k + 1]);
    }
  }
  return m;
}

void matrix_to_interleaved(const commsim::Matrix& m, double* out) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Eigen::Index k = 2 * (r * m.cols() + c);
      out[k] = m(r, c).real();
      out[k + 1] = m(r, c).imag();
    }
  }
}

commsim::EstimationMode mode_from_options(const commsim_run_options* options) {
  if (options == nullptr || options->sampled == 0) {
    return commsim::EstimationMode::exact();
  }
  return commsim::EstimationMode::sampled(options->shots, options->seed);
}

commsim::ShotAllocation allocation_from_options(
    const commsim_run_options* options) {
  if (options != nullptr && options->weighted_allocation != 0) {
    return commsim::ShotAllocation::WeightedByCoeff;
  }
  return commsim::ShotAllocation::EvenSplit;
}

commsim::RhoPrep rho_prep(const commsim_state* psi0,
                          const commsim_operator* hamiltonian, double time) {
  require(psi0 != nullptr, "psi0 must not be NULL");
  require(hamiltonian != nullptr, "hamiltonian must not be NULL");
  return {psi0->value,
          commsim::HamiltonianEvolution{hamiltonian->value, time}};
}

void write_result(const commsim::EstimationResult& r, commsim_result* out) {
  require(out != nullptr, "result pointer must not be NULL");
  out->re = r.value.real();
  out->im = r.value.imag();
  out->std_error = r.std_error;
  out->shots_used = r.shots_used;
  out->terms_evaluated = r.terms_evaluated;
}

void write_rate_matrix(const commsim::RateMatrix& rm, double* out_matrix,
                       double* out_std_errors) {
  require(out_matrix != nullptr, "output matrix must not be NULL");
  matrix_to_interleaved(rm.values(), out_matrix);
  if (out_std_errors != nullptr) {
    const Eigen::Index dim = rm.dim();
    for (Eigen::Index n = 0; n < dim; ++n) {
      for (Eigen::Index m = 0; m < dim; ++m) {
        out_std_errors[n * dim + m] = rm.provenance(n, m).std_error;
      }
    }
  }
}

int qubits_for_dim(long long dim) {
  int qubits = 0;
  while ((1LL << qubits) < dim) ++qubits;
  require(dim >= 2 && (1LL << qubits) == dim,
          "dimension must be a power of two >= 2");
  return qubits;
}

}  // namespace

const char* commsim_version(void) { return COMMSIM_VERSION; }

const char* commsim_status_name(commsim_status status) {
  switch (status) {
    case COMMSIM_OK: return "ok";
    case COMMSIM_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case COMMSIM_ERROR_DIMENSION_MISMATCH: return "dimension mismatch";
    case COMMSIM_ERROR_PARSE: return "parse error";
    case COMMSIM_ERROR_NUMERIC: return "numeric error";
    case COMMSIM_ERROR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* commsim_last_error(void) { return g_last_error.c_str(); }

commsim_status commsim_state_create(int num_qubits, const double* amplitudes,
                                    commsim_state** out) {
  return guarded([&] {
    require(amplitudes != nullptr && out != nullptr, "NULL argument");
    require(num_qubits >= 1, "num_qubits must be >= 1");
    const Eigen::Index dim = commsim::dim_for_qubits(num_qubits);
    *out = new commsim_state{
        commsim::StateVector(num_qubits, vector_from_interleaved(amplitudes, dim))};
  });
}

commsim_status commsim_state_basis(int num_qubits, long long index,
                                   commsim_state** out) {
  return guarded([&] {
    require(out != nullptr, "NULL argument");
    *out = new commsim_state{commsim::StateVector::basis(num_qubits, index)};
  });
}

commsim_status commsim_state_bloch(double theta, double phi,
                                   commsim_state** out) {
  return guarded([&] {
    require(out != nullptr, "NULL argument");
    *out = new commsim_state{commsim::StateVector::bloch(theta, phi)};
  });
}

int commsim_state_num_qubits(const commsim_state* state) {
  return state == nullptr ? 0 : state->value.num_qubits();
}

commsim_status commsim_state_amplitudes(const commsim_state* state,
                                        double* out_amplitudes) {
  return guarded([&] {
    require(state != nullptr && out_amplitudes != nullptr, "NULL argument");
    vector_to_interleaved(state->value.amplitudes(), out_amplitudes);
  });
}

void commsim_state_destroy(commsim_state* state) { delete state; }

commsim_status commsim_operator_create(long long dim, const double* entries,
                                       commsim_operator** out) {
  return guarded([&] {
    require(entries != nullptr && out != nullptr, "NULL argument");
    require(dim >= 1, "dimension must be >= 1");
    commsim::Matrix m = matrix_from_interleaved(entries, dim);
    require(m.allFinite(), "operator entries must be finite");
    *out = new commsim_operator{std::move(m)};
  });
}

commsim_status commsim_operator_identity(int num_qubits,
                                         commsim_operator** out) {
  return guarded([&] {
    require(out != nullptr, "NULL argument");
    require(num_qubits >= 1, "num_qubits must be >= 1");
    *out = new commsim_operator{
        commsim::identity_matrix(commsim::dim_for_qubits(num_qubits))};
  });
}

commsim_status commsim_operator_translation(int num_qubits, int power,
                                            commsim_operator** out) {
  return guarded([&] {
    require(out != nullptr, "NULL argument");
    *out = new commsim_operator{commsim::translation_operator(num_qubits, power)};
  });
}

long long commsim_operator_dim(const commsim_operator* op) {
  return op == nullptr ? 0 : static_cast<long long>(op->value.rows());
}

commsim_status commsim_operator_entries(const commsim_operator* op,
                                        double* out_entries) {
  return guarded([&] {
    require(op != nullptr && out_entries != nullptr, "NULL argument");
    matrix_to_interleaved(op->value, out_entries);
  });
}

void commsim_operator_destroy(commsim_operator* op) { delete op; }

commsim_status commsim_pauli_sum_parse(int num_qubits, const char* text,
                                       commsim_pauli_sum** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "NULL argument");
    *out = new commsim_pauli_sum{commsim::parse_pauli_sum(text, num_qubits)};
  });
}

commsim_status commsim_pauli_sum_format(const commsim_pauli_sum* sum,
                                        char** out_text) {
  return guarded([&] {
    require(sum != nullptr && out_text != nullptr, "NULL argument");
    const std::string text = commsim::format_pauli_sum(sum->value);
    char* buffer = new char[text.size() + 1];
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    *out_text = buffer;
  });
}

void commsim_string_destroy(char* text) { delete[] text; }

long long commsim_pauli_sum_num_terms(const commsim_pauli_sum* sum) {
  return sum == nullptr ? 0 : static_cast<long long>(sum->value.size());
}

int commsim_pauli_sum_num_qubits(const commsim_pauli_sum* sum) {
  return sum == nullptr ? 0 : sum->value.num_qubits();
}

commsim_status commsim_pauli_sum_to_operator(const commsim_pauli_sum* sum,
                                             commsim_operator** out) {
  return guarded([&] {
    require(sum != nullptr && out != nullptr, "NULL argument");
    *out = new commsim_operator{commsim::pauli_reconstruct(sum->value)};
  });
}

commsim_status commsim_operator_decompose(const commsim_operator* op,
                                          double drop_tolerance,
                                          commsim_pauli_sum** out) {
  return guarded([&] {
    require(op != nullptr && out != nullptr, "NULL argument");
    const double tol =
        drop_tolerance > 0 ? drop_tolerance : commsim::kDropTolerance;
    *out = new commsim_pauli_sum{commsim::pauli_decompose(op->value, tol)};
  });
}

void commsim_pauli_sum_destroy(commsim_pauli_sum* sum) { delete sum; }

commsim_status commsim_channel_create(int num_qubits,
                                      const commsim_operator* const* ops,
                                      int count, commsim_channel** out) {
  return guarded([&] {
    require(out != nullptr, "NULL argument");
    require(count == 0 || ops != nullptr, "NULL operator list");
    std::vector<commsim::Matrix> operators;
    operators.reserve(count);
    for (int i = 0; i < count; ++i) {
      require(ops[i] != nullptr, "NULL operator in channel list");
      operators.push_back(ops[i]->value);
    }
    *out = new commsim_channel{commsim::LindbladChannel(num_qubits, operators)};
  });
}

commsim_status commsim_channel_damping(double kappa, commsim_channel** out) {
  return guarded([&] {
    require(out != nullptr, "NULL argument");
    *out = new commsim_channel{commsim::damping_channel(kappa)};
  });
}

void commsim_channel_destroy(commsim_channel* channel) { delete channel; }

commsim_status commsim_control_probabilities(
    const commsim_state* psi0, const commsim_operator* hamiltonian,
    double time, const commsim_state* phi, const commsim_operator* op_n,
    const commsim_operator* op_a, const commsim_operator* op_m, double chi,
    double* out_p0, double* out_p1) {
  return guarded([&] {
    require(psi0 != nullptr && hamiltonian != nullptr && phi != nullptr,
            "NULL argument");
    require(out_p0 != nullptr && out_p1 != nullptr, "NULL output");
    const int L = psi0->value.num_qubits();
    const Eigen::Index dim = commsim::dim_for_qubits(L);
    const commsim::Matrix identity = commsim::identity_matrix(dim);
    commsim::CommutationCircuitSpec spec{
        .num_system_qubits = L,
        .chi = chi,
        .psi0 = psi0->value,
        .phi = phi->value,
        .evolution =
            commsim::HamiltonianEvolution{hamiltonian->value, time},
        .op_n = op_n != nullptr ? op_n->value : identity,
        .op_a = op_a != nullptr ? op_a->value : identity,
        .op_m = op_m != nullptr ? op_m->value : identity,
    };
    const auto [p0, p1] = commsim::control_probabilities(commsim::run_circuit(spec));
    *out_p0 = p0;
    *out_p1 = p1;
  });
}

commsim_status commsim_zchi_expectation(
    const commsim_state* psi0, const commsim_operator* hamiltonian,
    double time, const commsim_state* phi, const commsim_pauli_sum* n_sum,
    const commsim_pauli_sum* m_sum, const commsim_operator* a_op, double chi,
    const commsim_run_options* options, commsim_result* out) {
  return guarded([&] {
    require(phi != nullptr && n_sum != nullptr && m_sum != nullptr,
            "NULL argument");
    const commsim::RhoPrep rho = rho_prep(psi0, hamiltonian, time);
    const commsim::Matrix a =
        a_op != nullptr
            ? a_op->value
            : commsim::identity_matrix(
                  commsim::dim_for_qubits(psi0->value.num_qubits()));
    write_result(commsim::zchi_expectation(
                     rho, phi->value, n_sum->value, m_sum->value, a, chi,
                     mode_from_options(options), allocation_from_options(options)),
                 out);
  });
}

commsim_status commsim_commutator_expectation(
    const commsim_state* psi0, const commsim_operator* hamiltonian,
    double time, const commsim_state* phi, const commsim_pauli_sum* m_sum,
    const commsim_run_options* options, commsim_result* out) {
  return guarded([&] {
    require(phi != nullptr && m_sum != nullptr, "NULL argument");
    write_result(commsim::commutator_expectation(
                     rho_prep(psi0, hamiltonian, time), phi->value,
                     m_sum->value, mode_from_options(options),
                     allocation_from_options(options)),
                 out);
  });
}

commsim_status commsim_anticommutator_expectation(
    const commsim_state* psi0, const commsim_operator* hamiltonian,
    double time, const commsim_state* phi, const commsim_pauli_sum* m_sum,
    const commsim_run_options* options, commsim_result* out) {
  return guarded([&] {
    require(phi != nullptr && m_sum != nullptr, "NULL argument");
    write_result(commsim::anticommutator_expectation(
                     rho_prep(psi0, hamiltonian, time), phi->value,
                     m_sum->value, mode_from_options(options),
                     allocation_from_options(options)),
                 out);
  });
}

commsim_status commsim_matrix_element(
    const commsim_state* psi0, const commsim_operator* hamiltonian,
    double time, const commsim_state* phi, const commsim_pauli_sum* n_sum,
    const commsim_pauli_sum* m_sum, const commsim_operator* a_op,
    const commsim_run_options* options, commsim_result* out) {
  return guarded([&] {
    require(phi != nullptr && n_sum != nullptr && m_sum != nullptr,
            "NULL argument");
    const commsim::RhoPrep rho = rho_prep(psi0, hamiltonian, time);
    const commsim::Matrix a =
        a_op != nullptr
            ? a_op->value
            : commsim::identity_matrix(
                  commsim::dim_for_qubits(psi0->value.num_qubits()));
    write_result(commsim::matrix_element(rho, phi->value, n_sum->value,
                                         m_sum->value, a,
                                         mode_from_options(options),
                                         allocation_from_options(options)),
                 out);
  });
}

commsim_status commsim_vn_rate_matrix(const commsim_state* psi0,
                                      const commsim_operator* hamiltonian,
                                      double time,
                                      const commsim_run_options* options,
                                      double* out_matrix,
                                      double* out_std_errors) {
  return guarded([&] {
    const commsim::RhoPrep rho = rho_prep(psi0, hamiltonian, time);
    const commsim::WeightedPauliSum h_sum =
        commsim::pauli_decompose(hamiltonian->value);
    write_rate_matrix(
        commsim::rate_matrix(rho, h_sum, mode_from_options(options)),
        out_matrix, out_std_errors);
  });
}

commsim_status commsim_lindblad_rate_matrix(
    const commsim_state* psi0, const commsim_operator* hamiltonian,
    double delta_t, const commsim_channel* channel,
    const commsim_run_options* options, double* out_matrix,
    double* out_std_errors) {
  return guarded([&] {
    const commsim::RhoPrep rho = rho_prep(psi0, hamiltonian, delta_t);
    const commsim::WeightedPauliSum h_sum =
        commsim::pauli_decompose(hamiltonian->value);
    const commsim::LindbladChannel empty =
        commsim::LindbladChannel::none(psi0->value.num_qubits());
    write_rate_matrix(
        commsim::open_rate_matrix(rho,
                                  channel != nullptr ? channel->value : empty,
                                  h_sum, mode_from_options(options)),
        out_matrix, out_std_errors);
  });
}

commsim_status commsim_stationary_scan(
    const commsim_state* psi0, const commsim_operator* hamiltonian,
    const commsim_state* const* candidates, int num_candidates,
    const double* times, int num_times, const commsim_run_options* options,
    double tolerance, double* out_values, double* out_std_errors,
    int* out_stationary) {
  return guarded([&] {
    require(candidates != nullptr && num_candidates > 0, "no candidates");
    require(times != nullptr && num_times > 0, "empty time grid");
    require(out_values != nullptr && out_stationary != nullptr, "NULL output");
    std::vector<commsim::StateVector> refs;
    refs.reserve(num_candidates);
    for (int c = 0; c < num_candidates; ++c) {
      require(candidates[c] != nullptr, "NULL candidate");
      refs.push_back(candidates[c]->value);
    }
    const commsim::RhoPrep rho = rho_prep(psi0, hamiltonian, 0.0);
    const commsim::WeightedPauliSum h_sum =
        commsim::pauli_decompose(hamiltonian->value);
    const auto reports = commsim::stationary_scan(
        rho, refs, h_sum, std::vector<double>(times, times + num_times),
        mode_from_options(options), tolerance);
    for (int c = 0; c < num_candidates; ++c) {
      out_stationary[c] = reports[c].is_stationary ? 1 : 0;
      for (int i = 0; i < num_times; ++i) {
        out_values[c * num_times + i] = reports[c].values[i];
        if (out_std_errors != nullptr) {
          out_std_errors[c * num_times + i] = reports[c].std_errors[i];
        }
      }
    }
  });
}

commsim_status commsim_extract_frequency(const double* times,
                                         const double* values, int count,
                                         double* out_omega,
                                         double* out_uncertainty) {
  return guarded([&] {
    require(times != nullptr && values != nullptr, "NULL argument");
    require(out_omega != nullptr && out_uncertainty != nullptr, "NULL output");
    require(count > 0, "empty signal");
    commsim::ScanReport report;
    report.reference_label = "signal";
    report.time_grid.assign(times, times + count);
    report.values.assign(values, values + count);
    report.std_errors.assign(count, 0.0);
    const auto [omega, uncertainty] = commsim::extract_frequency(report);
    *out_omega = omega;
    *out_uncertainty = uncertainty;
  });
}

commsim_status commsim_kraus_step(const commsim_operator* rho,
                                  const commsim_operator* hamiltonian,
                                  const commsim_channel* channel,
                                  double delta_t, commsim_operator** out) {
  return guarded([&] {
    require(rho != nullptr && hamiltonian != nullptr && out != nullptr,
            "NULL argument");
    const int qubits = qubits_for_dim(rho->value.rows());
    const commsim::LindbladChannel empty = commsim::LindbladChannel::none(qubits);
    *out = new commsim_operator{commsim::kraus_step(
        commsim::DensityMatrix(rho->value), hamiltonian->value,
        channel != nullptr ? channel->value : empty, delta_t)};
  });
}

commsim_status commsim_integrate_lindblad(
    const commsim_operator* rho0, const commsim_operator* hamiltonian,
    const commsim_channel* channel, double t_final, double dt,
    const double* sample_times, int num_samples, double* out_states,
    double* out_trace_defects) {
  return guarded([&] {
    require(rho0 != nullptr && hamiltonian != nullptr, "NULL argument");
    require(sample_times != nullptr && num_samples > 0, "no sample times");
    require(out_states != nullptr, "NULL output");
    std::vector<commsim::Matrix> lindblad_ops;
    if (channel != nullptr) {
      for (const auto& op : channel->value.ops()) lindblad_ops.push_back(op.op);
    }
    const commsim::Trajectory trajectory = commsim::integrate_rates(
        commsim::DensityMatrix(rho0->value),
        commsim::lindblad_rhs(hamiltonian->value, lindblad_ops), t_final, dt);
    const Eigen::Index dim = rho0->value.rows();
    for (int s = 0; s < num_samples; ++s) {
      const commsim::Matrix& state = trajectory.state_at(sample_times[s]);
      matrix_to_interleaved(state, out_states + s * 2 * dim * dim);
      if (out_trace_defects != nullptr) {
        out_trace_defects[s] = std::abs(state.trace() - commsim::Complex(1.0, 0.0));
      }
    }
  });
}

commsim_status commsim_damping_landscape(
    commsim_demo_panel panel, double omega, double kappa, double phi,
    const double* thetas, int num_thetas, const double* times, int num_times,
    commsim_component component, const commsim_run_options* options,
    double* out_values) {
  return guarded([&] {
    require(thetas != nullptr && num_thetas > 0, "empty theta grid");
    require(times != nullptr && num_times > 0, "empty time grid");
    require(out_values != nullptr, "NULL output");
    commsim::DampingPanel core_panel;
    switch (panel) {
      case COMMSIM_PANEL_UNITARY_OFFDIAGONAL:
        core_panel = commsim::DampingPanel::UnitaryOffdiagonal;
        break;
      case COMMSIM_PANEL_JUMP_DIAGONAL:
        core_panel = commsim::DampingPanel::JumpDiagonal;
        break;
      case COMMSIM_PANEL_ANTICOMMUTATOR_DIAGONAL:
        core_panel = commsim::DampingPanel::AnticommutatorDiagonal;
        break;
      case COMMSIM_PANEL_ANTICOMMUTATOR_OFFDIAGONAL:
        core_panel = commsim::DampingPanel::AnticommutatorOffdiagonal;
        break;
      default:
        throw commsim::InvalidArgument("unknown demo panel");
    }
    commsim::GridComponent core_component;
    switch (component) {
      case COMMSIM_COMPONENT_RE:
        core_component = commsim::GridComponent::Real;
        break;
      case COMMSIM_COMPONENT_IM:
        core_component = commsim::GridComponent::Imag;
        break;
      case COMMSIM_COMPONENT_ABS:
        core_component = commsim::GridComponent::Abs;
        break;
      default:
        throw commsim::InvalidArgument("unknown component");
    }
    const Eigen::MatrixXd grid = commsim::damping_landscape(
        core_panel, omega, kappa, phi,
        std::vector<double>(thetas, thetas + num_thetas),
        std::vector<double>(times, times + num_times),
        mode_from_options(options), core_component);
    for (int i = 0; i < num_thetas; ++i) {
      for (int j = 0; j < num_times; ++j) {
        out_values[i * num_times + j] = grid(i, j);
      }
    }
  });
}
