#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace commsim_cli {

// Raised for malformed flags/grammar (exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised for numeric/runtime failures, including I/O (exit code 3).
struct RunError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when --help is requested; carries the text to print (exit code 0).
struct HelpRequested {
  std::string text;
};

struct JobConfig {
  enum class Command { Estimate, VnScan, LindbladRate, DampingDemo, Integrate };
  enum class EstimateKind { Commutator, Anticommutator, Zchi };

  Command command = Command::Estimate;
  int num_qubits = 1;

  // Pauli-sum grammar text; ';' doubles as a line separator, "@path" loads
  // the text from a file.
  std::string hamiltonian_text;
  std::vector<std::string> lindblad_texts;

  std::optional<std::vector<std::complex<double>>> psi0_amplitudes;
  std::optional<double> theta;
  double phi = 0.0;

  // Basis index or amplitude list. Empty means "|0>" for point estimates
  // and "every basis state" for vn-scan.
  std::string phi_ref;

  EstimateKind kind = EstimateKind::Commutator;
  std::optional<double> chi;

  double time = 0.0;
  std::vector<double> time_grid;
  std::vector<double> theta_grid;

  bool sampled = false;
  long long shots = 100000;
  unsigned long long seed = 1;
  bool weighted_allocation = false;

  std::string output_path;  // empty -> stdout (directory prefix for the demo)
  std::string format = "csv";
  std::string component = "re";
  int grid_res = 64;

  double omega = -2.0;
  double kappa = 1.0;
  double delta_t = 0.1;
  double t_final = 1.0;
  double dt = 1e-3;

  void validate() const;
};

// Parses a command line (without argv[0]) into a validated JobConfig.
// Throws ConfigError with a message naming the offending token.
JobConfig parse_config(const std::vector<std::string>& args);

// Runs a validated job, writing its artefacts. Throws ConfigError/RunError.
void run_job(const JobConfig& config);

// Shared literal/grid helpers (exposed for tests).
std::complex<double> parse_complex_literal(const std::string& token);
std::vector<std::complex<double>> parse_amplitude_list(const std::string& text);
std::vector<double> parse_grid_spec(const std::string& text);

// Resolves '@path' file references and ';' separators in Pauli-sum flags.
std::string load_grammar_text(const std::string& flag_text);

}  // namespace commsim_cli
