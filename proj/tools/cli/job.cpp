#include "job.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <commsim.h>

namespace commsim_cli {

namespace {

double parse_double_strict(const std::string& token, const char* what) {
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size() || token.empty() ||
      !std::isfinite(value)) {
    throw ConfigError(std::string(what) + ": malformed number \"" + token +
                      "\"");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      out.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  out.push_back(current);
  return out;
}

}  // namespace

std::complex<double> parse_complex_literal(const std::string& token) {
  const char* begin = token.c_str();
  const char* tail = begin + token.size();
  char* cursor = nullptr;
  const double first = std::strtod(begin, &cursor);
  if (cursor == begin) {
    throw ConfigError("malformed complex literal \"" + token + "\"");
  }
  if (cursor == tail) return {first, 0.0};
  if (*cursor == 'j' && cursor + 1 == tail) return {0.0, first};
  if (*cursor == '+' || *cursor == '-') {
    char* cursor2 = nullptr;
    const double second = std::strtod(cursor, &cursor2);
    if (cursor2 != cursor && *cursor2 == 'j' && cursor2 + 1 == tail) {
      return {first, second};
    }
  }
  throw ConfigError("malformed complex literal \"" + token + "\"");
}

std::vector<std::complex<double>> parse_amplitude_list(const std::string& text) {
  std::vector<std::complex<double>> out;
  for (const std::string& token : split(text, ',')) {
    out.push_back(parse_complex_literal(token));
  }
  return out;
}

std::string load_grammar_text(const std::string& flag_text) {
  std::string text = flag_text;
  if (!text.empty() && text.front() == '@') {
    const std::string path = text.substr(1);
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot read Pauli-sum file \"" + path + "\"");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    text = buffer.str();
  }
  std::replace(text.begin(), text.end(), ';', '\n');
  return text;
}

std::vector<double> parse_grid_spec(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
      throw ConfigError("grid spec must be start:stop:count, got \"" + text +
                        "\"");
    }
    const double start = parse_double_strict(parts[0], "grid start");
    const double stop = parse_double_strict(parts[1], "grid stop");
    const long count = std::strtol(parts[2].c_str(), nullptr, 10);
    if (count < 1) throw ConfigError("grid count must be >= 1");
    if (count == 1) {
      out.push_back(start);
    } else {
      for (long i = 0; i < count; ++i) {
        out.push_back(start + (stop - start) * static_cast<double>(i) /
                                  static_cast<double>(count - 1));
      }
    }
  } else {
    for (const std::string& token : split(text, ',')) {
      out.push_back(parse_double_strict(token, "grid value"));
    }
  }
  if (out.empty()) throw ConfigError("grid \"" + text + "\" is empty");
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(out[i] > out[i - 1])) {
      throw ConfigError("grid \"" + text + "\" must be strictly increasing");
    }
  }
  return out;
}

void JobConfig::validate() const {
  if (num_qubits < 1 || num_qubits > 12) {
    throw ConfigError("num_qubits must be in [1, 12]");
  }
  if (format != "csv" && format != "json") {
    throw ConfigError("format must be csv or json, got \"" + format + "\"");
  }
  if (component != "re" && component != "im" && component != "abs") {
    throw ConfigError("component must be re, im or abs");
  }
  if (sampled && shots < 1) throw ConfigError("shots must be >= 1");
  if (grid_res < 1) throw ConfigError("grid resolution must be >= 1");
  if (psi0_amplitudes.has_value()) {
    if (static_cast<long long>(psi0_amplitudes->size()) !=
        (1LL << num_qubits)) {
      throw ConfigError("psi0 needs " + std::to_string(1LL << num_qubits) +
                        " amplitudes");
    }
  }
  if (theta.has_value() && num_qubits != 1) {
    throw ConfigError("--theta/--phi describe a single qubit; use --psi0 for larger registers");
  }
  switch (command) {
    case Command::Estimate:
      if (hamiltonian_text.empty()) throw ConfigError("estimate needs -H");
      break;
    case Command::VnScan:
      if (hamiltonian_text.empty()) throw ConfigError("vn-scan needs -H");
      if (time_grid.empty()) throw ConfigError("vn-scan needs --time-grid");
      break;
    case Command::LindbladRate:
      if (hamiltonian_text.empty()) throw ConfigError("lindblad-rate needs -H");
      break;
    case Command::DampingDemo:
      if (kappa < 0) throw ConfigError("kappa must be >= 0");
      if (!(delta_t > 0)) throw ConfigError("delta-t must be > 0");
      if (output_path.empty()) {
        throw ConfigError("damping-demo needs --output (directory prefix)");
      }
      break;
    case Command::Integrate:
      if (hamiltonian_text.empty()) throw ConfigError("integrate needs -H");
      if (!(dt > 0)) throw ConfigError("dt must be > 0");
      if (t_final < 0) throw ConfigError("t-final must be >= 0");
      break;
  }
}

JobConfig parse_config(const std::vector<std::string>& args) {
  JobConfig config;

  CLI::App app{"commsim — commutation-circuit simulator for open quantum dynamics"};
  app.require_subcommand(1);

  std::string psi0_text, time_grid_text, theta_grid_text, mode_text = "exact";
  std::string kind_text = "commutator", allocation_text = "even";
  std::string chi_text, theta_text;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-L,--num-qubits", config.num_qubits,
                    "system register size");
    cmd->add_option("-H,--hamiltonian", config.hamiltonian_text,
                    "Hamiltonian as Pauli-sum text (';' separates terms, "
                    "@path loads a file)");
    cmd->add_option("--lindblad", config.lindblad_texts,
                    "Lindblad operator as Pauli-sum text (repeatable)");
    cmd->add_option("--psi0", psi0_text,
                    "initial state amplitudes, e.g. \"0.6,0.8j\"");
    cmd->add_option("--theta", theta_text,
                    "Bloch polar angle of psi0 (single qubit)");
    cmd->add_option("--phi", config.phi, "Bloch azimuthal angle of psi0");
    cmd->add_option("--phi-ref", config.phi_ref,
                    "reference state: basis index or amplitude list");
    cmd->add_option("--chi", chi_text, "control rotation angle (radians)");
    cmd->add_option("--time", config.time, "evolution time");
    cmd->add_option("--time-grid", time_grid_text,
                    "time grid, start:stop:count or comma list");
    cmd->add_option("--theta-grid", theta_grid_text, "theta grid");
    cmd->add_option("--mode", mode_text, "exact or sampled")
        ->check(CLI::IsMember({"exact", "sampled"}));
    cmd->add_option("--shots", config.shots, "shots per estimate (sampled)");
    cmd->add_option("--seed", config.seed, "PRNG seed (sampled)");
    cmd->add_option("--allocation", allocation_text,
                    "shot allocation across decomposition terms")
        ->check(CLI::IsMember({"even", "weighted"}));
    cmd->add_option("-o,--output", config.output_path,
                    "output file (directory prefix for damping-demo)");
    cmd->add_option("--format", config.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--component", config.component,
                    "complex component to emit: re, im or abs")
        ->check(CLI::IsMember({"re", "im", "abs"}));
    cmd->add_option("--grid-res", config.grid_res,
                    "landscape resolution per axis");
  };

  CLI::App* estimate = app.add_subcommand(
      "estimate", "commutator/anti-commutator expectation against M = H");
  add_common(estimate);
  estimate->add_option("--kind", kind_text, "commutator, anticommutator or zchi")
      ->check(CLI::IsMember({"commutator", "anticommutator", "zchi"}));

  CLI::App* vn_scan = app.add_subcommand(
      "vn-scan", "stationary-state scan over reference candidates");
  add_common(vn_scan);

  CLI::App* lindblad_rate = app.add_subcommand(
      "lindblad-rate", "assemble the open-system rate matrix at rho(delta t)");
  add_common(lindblad_rate);

  CLI::App* demo = app.add_subcommand(
      "damping-demo", "amplitude-damping landscapes and rate-matrix report");
  add_common(demo);
  demo->add_option("--omega", config.omega, "qubit frequency");
  demo->add_option("--kappa", config.kappa, "damping rate");
  demo->add_option("--delta-t", config.delta_t, "Lindblad segment duration");

  CLI::App* integrate = app.add_subcommand(
      "integrate", "RK4 integration of the master equation from |psi0>");
  add_common(integrate);
  integrate->add_option("--t-final", config.t_final, "integration end time");
  integrate->add_option("--dt", config.dt, "RK4 step");
  integrate->add_option("--kappa", config.kappa,
                        "damping rate for --damping channels");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  if (estimate->parsed()) {
    config.command = JobConfig::Command::Estimate;
    if (kind_text == "commutator") config.kind = JobConfig::EstimateKind::Commutator;
    if (kind_text == "anticommutator") {
      config.kind = JobConfig::EstimateKind::Anticommutator;
    }
    if (kind_text == "zchi") config.kind = JobConfig::EstimateKind::Zchi;
  }
  if (vn_scan->parsed()) config.command = JobConfig::Command::VnScan;
  if (lindblad_rate->parsed()) config.command = JobConfig::Command::LindbladRate;
  if (demo->parsed()) config.command = JobConfig::Command::DampingDemo;
  if (integrate->parsed()) config.command = JobConfig::Command::Integrate;

  if (!psi0_text.empty()) {
    config.psi0_amplitudes = parse_amplitude_list(psi0_text);
  }
  if (!time_grid_text.empty()) config.time_grid = parse_grid_spec(time_grid_text);
  if (!theta_grid_text.empty()) {
    config.theta_grid = parse_grid_spec(theta_grid_text);
  }
  if (!chi_text.empty()) {
    config.chi = parse_double_strict(chi_text, "--chi");
  }
  if (!theta_text.empty()) {
    config.theta = parse_double_strict(theta_text, "--theta");
  }
  config.sampled = (mode_text == "sampled");
  config.weighted_allocation = (allocation_text == "weighted");

  config.validate();

  // Surface malformed Pauli terms at parse time, with the grammar's
  // token/line diagnostics.
  auto check_grammar = [&config](const std::string& flag_text) {
    if (flag_text.empty()) return;
    commsim_pauli_sum* sum = nullptr;
    const commsim_status status = commsim_pauli_sum_parse(
        config.num_qubits, load_grammar_text(flag_text).c_str(), &sum);
    if (status != COMMSIM_OK) {
      throw ConfigError(commsim_last_error());
    }
    commsim_pauli_sum_destroy(sum);
  };
  check_grammar(config.hamiltonian_text);
  for (const std::string& text : config.lindblad_texts) check_grammar(text);

  return config;
}

}  // namespace commsim_cli
