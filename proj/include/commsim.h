/*
 * commsim — classical simulator of the quantum commutation circuit.
 *
 * C API over the simulator core: opaque handles, status-code returns, and a
 * per-thread error message. Complex scalars travel as interleaved double
 * pairs [re0, im0, re1, im1, ...]; matrices are row-major. All handles are
 * created by commsim_*_create-style calls and released with the matching
 * commsim_*_destroy.
 */
#ifndef COMMSIM_H
#define COMMSIM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum commsim_status {
  COMMSIM_OK = 0,
  COMMSIM_ERROR_INVALID_ARGUMENT = 1,
  COMMSIM_ERROR_DIMENSION_MISMATCH = 2,
  COMMSIM_ERROR_PARSE = 3,
  COMMSIM_ERROR_NUMERIC = 4,
  COMMSIM_ERROR_INTERNAL = 5
} commsim_status;

const char* commsim_version(void);
const char* commsim_status_name(commsim_status status);

/* Message for the most recent failing call on this thread ("" if none). */
const char* commsim_last_error(void);

typedef struct commsim_state commsim_state;
typedef struct commsim_operator commsim_operator;
typedef struct commsim_pauli_sum commsim_pauli_sum;
typedef struct commsim_channel commsim_channel;

/* sampled = 0 runs exact evaluation (shots/seed ignored). With
 * weighted_allocation != 0 a sampled shot budget is split across
 * decomposition terms proportionally to |coeff| instead of evenly. */
typedef struct commsim_run_options {
  int sampled;
  long long shots;
  uint64_t seed;
  int weighted_allocation;
} commsim_run_options;

typedef struct commsim_result {
  double re;
  double im;
  double std_error;       /* 0 for exact runs */
  long long shots_used;
  int terms_evaluated;
} commsim_result;

/* ---- states ---------------------------------------------------------- */

commsim_status commsim_state_create(int num_qubits, const double* amplitudes,
                                    commsim_state** out);
commsim_status commsim_state_basis(int num_qubits, long long index,
                                   commsim_state** out);
/* cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> (single qubit). */
commsim_status commsim_state_bloch(double theta, double phi,
                                   commsim_state** out);
int commsim_state_num_qubits(const commsim_state* state);
commsim_status commsim_state_amplitudes(const commsim_state* state,
                                        double* out_amplitudes);
void commsim_state_destroy(commsim_state* state);

/* ---- dense operators -------------------------------------------------- */

commsim_status commsim_operator_create(long long dim, const double* entries,
                                       commsim_operator** out);
commsim_status commsim_operator_identity(int num_qubits, commsim_operator** out);
/* Cyclic shift T^power |n> = |(n + power) mod 2^L>, 1 <= power < 2^L. */
commsim_status commsim_operator_translation(int num_qubits, int power,
                                            commsim_operator** out);
long long commsim_operator_dim(const commsim_operator* op);
commsim_status commsim_operator_entries(const commsim_operator* op,
                                        double* out_entries);
void commsim_operator_destroy(commsim_operator* op);

/* ---- Pauli sums -------------------------------------------------------- */

/* Grammar: one term per line, "<re>[+<im>j] <LETTER><qubit> ...", identity
 * term "<coeff> I". Example: "0.5 X0\n0.5j Y0". */
commsim_status commsim_pauli_sum_parse(int num_qubits, const char* text,
                                       commsim_pauli_sum** out);
commsim_status commsim_pauli_sum_format(const commsim_pauli_sum* sum,
                                        char** out_text);
void commsim_string_destroy(char* text);
long long commsim_pauli_sum_num_terms(const commsim_pauli_sum* sum);
int commsim_pauli_sum_num_qubits(const commsim_pauli_sum* sum);
commsim_status commsim_pauli_sum_to_operator(const commsim_pauli_sum* sum,
                                             commsim_operator** out);
commsim_status commsim_operator_decompose(const commsim_operator* op,
                                          double drop_tolerance,
                                          commsim_pauli_sum** out);
void commsim_pauli_sum_destroy(commsim_pauli_sum* sum);

/* ---- Lindblad channels -------------------------------------------------- */

commsim_status commsim_channel_create(int num_qubits,
                                      const commsim_operator* const* ops,
                                      int count, commsim_channel** out);
/* Spontaneous emission, L = (sqrt(kappa)/2)(X + iY). */
commsim_status commsim_channel_damping(double kappa, commsim_channel** out);
void commsim_channel_destroy(commsim_channel* channel);

/* ---- circuit read-out ---------------------------------------------------- */

/* Control-qubit outcome masses of one commutation-circuit run with dense
 * controlled operators (any of op_n/op_a/op_m may be NULL for identity). */
commsim_status commsim_control_probabilities(
    const commsim_state* psi0, const commsim_operator* hamiltonian,
    double time, const commsim_state* phi, const commsim_operator* op_n,
    const commsim_operator* op_a, const commsim_operator* op_m, double chi,
    double* out_p0, double* out_p1);

/* ---- expectation estimators ---------------------------------------------- */

/* <Phi| Z^chi_A |Phi> with N and M as Pauli decompositions; a_op NULL means
 * identity. */
commsim_status commsim_zchi_expectation(
    const commsim_state* psi0, const commsim_operator* hamiltonian,
    double time, const commsim_state* phi, const commsim_pauli_sum* n_sum,
    const commsim_pauli_sum* m_sum, const commsim_operator* a_op, double chi,
    const commsim_run_options* options, commsim_result* out);

/* i <Phi|[rho(t), M]|Phi> for Hermitian M. */
commsim_status commsim_commutator_expectation(
    const commsim_state* psi0, const commsim_operator* hamiltonian,
    double time, const commsim_state* phi, const commsim_pauli_sum* m_sum,
    const commsim_run_options* options, commsim_result* out);

/* <Phi|{rho(t), M}|Phi> for Hermitian M. */
commsim_status commsim_anticommutator_expectation(
    const commsim_state* psi0, const commsim_operator* hamiltonian,
    double time, const commsim_state* phi, const commsim_pauli_sum* m_sum,
    const commsim_run_options* options, commsim_result* out);

/* <Phi| N rho(t) M |Phi'> with |Phi'> = A|Phi>, A unitary. */
commsim_status commsim_matrix_element(
    const commsim_state* psi0, const commsim_operator* hamiltonian,
    double time, const commsim_state* phi, const commsim_pauli_sum* n_sum,
    const commsim_pauli_sum* m_sum, const commsim_operator* a_op,
    const commsim_run_options* options, commsim_result* out);

/* ---- rate matrices -------------------------------------------------------- */

/* out_matrix: 2*dim*dim doubles (interleaved, row-major). out_std_errors:
 * dim*dim doubles or NULL. */
commsim_status commsim_vn_rate_matrix(const commsim_state* psi0,
                                      const commsim_operator* hamiltonian,
                                      double time,
                                      const commsim_run_options* options,
                                      double* out_matrix,
                                      double* out_std_errors);

commsim_status commsim_lindblad_rate_matrix(
    const commsim_state* psi0, const commsim_operator* hamiltonian,
    double delta_t, const commsim_channel* channel,
    const commsim_run_options* options, double* out_matrix,
    double* out_std_errors);

/* ---- scans and frequency --------------------------------------------------- */

/* Evaluates i<Phi|[rho(t), H]|Phi> for each candidate over the time grid.
 * tolerance <= 0 selects the defaults (1e-9 exact, 5*std_error sampled).
 * out_values / out_std_errors: num_candidates * num_times (row per
 * candidate); out_std_errors may be NULL. out_stationary: one flag per
 * candidate. */
commsim_status commsim_stationary_scan(
    const commsim_state* psi0, const commsim_operator* hamiltonian,
    const commsim_state* const* candidates, int num_candidates,
    const double* times, int num_times, const commsim_run_options* options,
    double tolerance, double* out_values, double* out_std_errors,
    int* out_stationary);

/* Dominant |omega| of a uniformly sampled signal (spectral peak with
 * quadratic interpolation); out_uncertainty is the frequency bin width. */
commsim_status commsim_extract_frequency(const double* times,
                                         const double* values, int count,
                                         double* out_omega,
                                         double* out_uncertainty);

/* ---- Kraus step and integration ---------------------------------------------- */

/* One step of the first-order Kraus update; channel may be NULL or hold a
 * single operator. rho must be a valid density matrix. */
commsim_status commsim_kraus_step(const commsim_operator* rho,
                                  const commsim_operator* hamiltonian,
                                  const commsim_channel* channel,
                                  double delta_t, commsim_operator** out);

/* RK4 integration of the master equation from rho0; snapshots are taken at
 * sample_times (each must lie on the step grid within 1e-9). out_states:
 * num_samples * 2*dim*dim doubles. out_trace_defects (optional):
 * |trace - 1| per snapshot. */
commsim_status commsim_integrate_lindblad(
    const commsim_operator* rho0, const commsim_operator* hamiltonian,
    const commsim_channel* channel, double t_final, double dt,
    const double* sample_times, int num_samples, double* out_states,
    double* out_trace_defects);

/* ---- damping demo -------------------------------------------------------------- */

typedef enum commsim_demo_panel {
  COMMSIM_PANEL_UNITARY_OFFDIAGONAL = 0,
  COMMSIM_PANEL_JUMP_DIAGONAL = 1,
  COMMSIM_PANEL_ANTICOMMUTATOR_DIAGONAL = 2,
  COMMSIM_PANEL_ANTICOMMUTATOR_OFFDIAGONAL = 3
} commsim_demo_panel;

typedef enum commsim_component {
  COMMSIM_COMPONENT_RE = 0,
  COMMSIM_COMPONENT_IM = 1,
  COMMSIM_COMPONENT_ABS = 2
} commsim_component;

/* Landscape surface of one demo panel over (theta, t); out_values has
 * num_thetas * num_times entries, theta-major. */
commsim_status commsim_damping_landscape(
    commsim_demo_panel panel, double omega, double kappa, double phi,
    const double* thetas, int num_thetas, const double* times, int num_times,
    commsim_component component, const commsim_run_options* options,
    double* out_values);

#ifdef __cplusplus
}
#endif

#endif /* COMMSIM_H */
