#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <numbers>

#include <commsim.h>
#include <json.hpp>

#include "emit.hpp"
#include "job.hpp"

namespace commsim_cli {

namespace {

using ordered_json = nlohmann::ordered_json;

void check(commsim_status status) {
  if (status == COMMSIM_OK) return;
  const std::string message =
      std::string(commsim_status_name(status)) + ": " + commsim_last_error();
  switch (status) {
    case COMMSIM_ERROR_PARSE:
    case COMMSIM_ERROR_INVALID_ARGUMENT:
    case COMMSIM_ERROR_DIMENSION_MISMATCH:
      throw ConfigError(message);
    default:
      throw RunError(message);
  }
}

using StatePtr = std::unique_ptr<commsim_state, void (*)(commsim_state*)>;
using OperatorPtr =
    std::unique_ptr<commsim_operator, void (*)(commsim_operator*)>;
using PauliPtr =
    std::unique_ptr<commsim_pauli_sum, void (*)(commsim_pauli_sum*)>;
using ChannelPtr =
    std::unique_ptr<commsim_channel, void (*)(commsim_channel*)>;

StatePtr wrap(commsim_state* p) { return {p, &commsim_state_destroy}; }
OperatorPtr wrap(commsim_operator* p) { return {p, &commsim_operator_destroy}; }
PauliPtr wrap(commsim_pauli_sum* p) { return {p, &commsim_pauli_sum_destroy}; }
ChannelPtr wrap(commsim_channel* p) { return {p, &commsim_channel_destroy}; }

PauliPtr parse_sum(int num_qubits, const std::string& flag_text) {
  commsim_pauli_sum* sum = nullptr;
  check(commsim_pauli_sum_parse(num_qubits, load_grammar_text(flag_text).c_str(),
                                &sum));
  return wrap(sum);
}

OperatorPtr sum_to_operator(const commsim_pauli_sum* sum) {
  commsim_operator* op = nullptr;
  check(commsim_pauli_sum_to_operator(sum, &op));
  return wrap(op);
}

StatePtr build_psi0(const JobConfig& config) {
  commsim_state* state = nullptr;
  if (config.psi0_amplitudes.has_value()) {
    std::vector<double> buffer;
    buffer.reserve(2 * config.psi0_amplitudes->size());
    for (const auto& amp : *config.psi0_amplitudes) {
      buffer.push_back(amp.real());
      buffer.push_back(amp.imag());
    }
    check(commsim_state_create(config.num_qubits, buffer.data(), &state));
  } else if (config.theta.has_value()) {
    check(commsim_state_bloch(*config.theta, config.phi, &state));
  } else {
    check(commsim_state_basis(config.num_qubits, 0, &state));
  }
  return wrap(state);
}

bool looks_like_basis_index(const std::string& text) {
  if (text.empty()) return false;
  return text.find_first_not_of("0123456789") == std::string::npos;
}

StatePtr build_reference(const JobConfig& config, const std::string& text) {
  commsim_state* state = nullptr;
  if (looks_like_basis_index(text)) {
    check(commsim_state_basis(config.num_qubits, std::atoll(text.c_str()),
                              &state));
  } else {
    const auto amps = parse_amplitude_list(text);
    if (static_cast<long long>(amps.size()) != (1LL << config.num_qubits)) {
      throw ConfigError("phi-ref needs " +
                        std::to_string(1LL << config.num_qubits) +
                        " amplitudes");
    }
    std::vector<double> buffer;
    for (const auto& amp : amps) {
      buffer.push_back(amp.real());
      buffer.push_back(amp.imag());
    }
    check(commsim_state_create(config.num_qubits, buffer.data(), &state));
  }
  return wrap(state);
}

commsim_run_options options_from(const JobConfig& config) {
  commsim_run_options options{};
  options.sampled = config.sampled ? 1 : 0;
  options.shots = config.shots;
  options.seed = config.seed;
  options.weighted_allocation = config.weighted_allocation ? 1 : 0;
  return options;
}

Metadata base_metadata(const JobConfig& config, const std::string& command) {
  Metadata meta;
  meta.emplace_back("tool", "commsim");
  meta.emplace_back("version", commsim_version());
  meta.emplace_back("command", command);
  meta.emplace_back("num_qubits", std::to_string(config.num_qubits));
  meta.emplace_back("mode", config.sampled ? "sampled" : "exact");
  if (config.sampled) {
    meta.emplace_back("shots", std::to_string(config.shots));
    meta.emplace_back("seed", std::to_string(config.seed));
    meta.emplace_back("allocation",
                      config.weighted_allocation ? "weighted" : "even");
  }
  return meta;
}

ordered_json meta_json(const Metadata& meta) {
  ordered_json out = ordered_json::object();
  for (const auto& [key, value] : meta) out[key] = value;
  return out;
}

ordered_json result_json(const commsim_result& result) {
  return ordered_json{{"re", result.re},
                      {"im", result.im},
                      {"std_error", result.std_error},
                      {"shots_used", result.shots_used},
                      {"terms_evaluated", result.terms_evaluated}};
}

std::vector<double> default_grid(double start, double stop, int count) {
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) {
    grid[i] = start + (stop - start) * static_cast<double>(i) /
                          static_cast<double>(std::max(1, count - 1));
  }
  return grid;
}

void run_estimate(const JobConfig& config) {
  const PauliPtr h_sum = parse_sum(config.num_qubits, config.hamiltonian_text);
  const OperatorPtr h = sum_to_operator(h_sum.get());
  const StatePtr psi0 = build_psi0(config);
  const StatePtr phi = build_reference(
      config, config.phi_ref.empty() ? "0" : config.phi_ref);
  const commsim_run_options options = options_from(config);

  commsim_result result{};
  std::string quantity;
  switch (config.kind) {
    case JobConfig::EstimateKind::Commutator:
      quantity = "i<phi|[rho(t),H]|phi>";
      check(commsim_commutator_expectation(psi0.get(), h.get(), config.time,
                                           phi.get(), h_sum.get(), &options,
                                           &result));
      break;
    case JobConfig::EstimateKind::Anticommutator:
      quantity = "<phi|{rho(t),H}|phi>";
      check(commsim_anticommutator_expectation(psi0.get(), h.get(), config.time,
                                               phi.get(), h_sum.get(), &options,
                                               &result));
      break;
    case JobConfig::EstimateKind::Zchi: {
      quantity = "<phi|Z^chi_1|phi>";
      const PauliPtr identity = parse_sum(config.num_qubits, "1.0 I");
      check(commsim_zchi_expectation(psi0.get(), h.get(), config.time,
                                     phi.get(), identity.get(), h_sum.get(),
                                     nullptr, config.chi.value_or(0.0),
                                     &options, &result));
      break;
    }
  }

  Metadata meta = base_metadata(config, "estimate");
  meta.emplace_back("quantity", quantity);
  meta.emplace_back("time", format_double(config.time));
  if (config.chi.has_value()) {
    meta.emplace_back("chi", format_double(*config.chi));
  }

  if (config.format == "json") {
    ordered_json doc;
    doc["meta"] = meta_json(meta);
    doc["result"] = result_json(result);
    write_output(config.output_path, doc.dump(2) + "\n");
  } else {
    std::string csv = "re,im,std_error,shots_used,terms_evaluated\n";
    csv += format_double(result.re) + "," + format_double(result.im) + "," +
           format_double(result.std_error) + "," +
           std::to_string(result.shots_used) + "," +
           std::to_string(result.terms_evaluated) + "\n";
    write_output(config.output_path, csv);
  }
}

void run_vn_scan(const JobConfig& config) {
  const PauliPtr h_sum = parse_sum(config.num_qubits, config.hamiltonian_text);
  const OperatorPtr h = sum_to_operator(h_sum.get());
  const StatePtr psi0 = build_psi0(config);
  const commsim_run_options options = options_from(config);

  // Default candidate set: every computational basis state.
  std::vector<StatePtr> candidates;
  std::vector<std::string> labels;
  if (config.phi_ref.empty()) {
    const long long dim = 1LL << config.num_qubits;
    for (long long n = 0; n < dim; ++n) {
      commsim_state* state = nullptr;
      check(commsim_state_basis(config.num_qubits, n, &state));
      candidates.push_back(wrap(state));
      labels.push_back("|" + std::to_string(n) + ">");
    }
  } else {
    candidates.push_back(build_reference(config, config.phi_ref));
    labels.push_back(config.phi_ref);
  }

  std::vector<const commsim_state*> raw;
  for (const auto& c : candidates) raw.push_back(c.get());
  const int num_candidates = static_cast<int>(candidates.size());
  const int num_times = static_cast<int>(config.time_grid.size());

  std::vector<double> values(num_candidates * num_times);
  std::vector<double> errors(num_candidates * num_times);
  std::vector<int> stationary(num_candidates);
  check(commsim_stationary_scan(psi0.get(), h.get(), raw.data(), num_candidates,
                                config.time_grid.data(), num_times, &options,
                                -1.0, values.data(), errors.data(),
                                stationary.data()));

  ordered_json report = ordered_json::array();
  for (int c = 0; c < num_candidates; ++c) {
    ordered_json entry;
    entry["label"] = labels[c];
    entry["stationary"] = stationary[c] != 0;
    entry["values"] =
        std::vector<double>(values.begin() + c * num_times,
                            values.begin() + (c + 1) * num_times);
    if (config.sampled) {
      entry["std_errors"] =
          std::vector<double>(errors.begin() + c * num_times,
                              errors.begin() + (c + 1) * num_times);
    }
    if (stationary[c] == 0) {
      double omega = 0.0, uncertainty = 0.0;
      if (commsim_extract_frequency(config.time_grid.data(),
                                    values.data() + c * num_times, num_times,
                                    &omega, &uncertainty) == COMMSIM_OK) {
        entry["frequency"] = {{"omega", omega}, {"uncertainty", uncertainty}};
      }
    }
    report.push_back(std::move(entry));
  }

  Metadata meta = base_metadata(config, "vn-scan");
  meta.emplace_back("time_grid_points", std::to_string(num_times));

  if (config.format == "json") {
    ordered_json doc;
    doc["meta"] = meta_json(meta);
    doc["times"] = config.time_grid;
    doc["candidates"] = std::move(report);
    write_output(config.output_path, doc.dump(2) + "\n");
  } else {
    GridData grid;
    grid.axis1_name = "candidate";
    grid.axis2_name = "t";
    for (int c = 0; c < num_candidates; ++c) grid.axis1.push_back(c);
    grid.axis2 = config.time_grid;
    grid.values = values;
    write_output(config.output_path, grid_to_csv(grid));
  }
}

MatrixData fetch_lindblad_rate(const JobConfig& config) {
  const PauliPtr h_sum = parse_sum(config.num_qubits, config.hamiltonian_text);
  const OperatorPtr h = sum_to_operator(h_sum.get());
  const StatePtr psi0 = build_psi0(config);
  const commsim_run_options options = options_from(config);

  std::vector<OperatorPtr> lindblad_ops;
  std::vector<const commsim_operator*> raw_ops;
  for (const std::string& text : config.lindblad_texts) {
    const PauliPtr sum = parse_sum(config.num_qubits, text);
    lindblad_ops.push_back(sum_to_operator(sum.get()));
    raw_ops.push_back(lindblad_ops.back().get());
  }
  ChannelPtr channel = wrap(static_cast<commsim_channel*>(nullptr));
  if (!raw_ops.empty()) {
    commsim_channel* ch = nullptr;
    check(commsim_channel_create(config.num_qubits, raw_ops.data(),
                                 static_cast<int>(raw_ops.size()), &ch));
    channel = wrap(ch);
  }

  const long long dim = 1LL << config.num_qubits;
  MatrixData matrix;
  matrix.dim = dim;
  matrix.entries.resize(2 * dim * dim);
  matrix.std_errors.resize(dim * dim);
  check(commsim_lindblad_rate_matrix(psi0.get(), h.get(), config.time,
                                     channel.get(), &options,
                                     matrix.entries.data(),
                                     matrix.std_errors.data()));
  if (!config.sampled) matrix.std_errors.clear();
  return matrix;
}

void run_lindblad_rate(const JobConfig& config) {
  const MatrixData matrix = fetch_lindblad_rate(config);
  Metadata meta = base_metadata(config, "lindblad-rate");
  meta.emplace_back("delta_t", format_double(config.time));
  meta.emplace_back("lindblad_operators",
                    std::to_string(config.lindblad_texts.size()));
  if (config.format == "json") {
    write_output(config.output_path, matrix_to_json_text(matrix, meta));
  } else {
    write_output(config.output_path, matrix_to_csv(matrix));
  }
}

void run_damping_demo(const JobConfig& config) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.output_path, ec);
  if (ec) {
    throw RunError("cannot create output directory \"" + config.output_path +
                   "\": " + ec.message());
  }

  const std::vector<double> thetas =
      config.theta_grid.empty()
          ? default_grid(0.0, 2.0 * std::numbers::pi, config.grid_res)
          : config.theta_grid;
  const std::vector<double> times =
      config.time_grid.empty() ? default_grid(0.0, 3.0, config.grid_res)
                               : config.time_grid;

  commsim_component component = COMMSIM_COMPONENT_RE;
  if (config.component == "im") component = COMMSIM_COMPONENT_IM;
  if (config.component == "abs") component = COMMSIM_COMPONENT_ABS;

  const commsim_run_options options = options_from(config);
  const struct {
    commsim_demo_panel panel;
    const char* name;
    const char* quantity;
  } panels[] = {
      {COMMSIM_PANEL_UNITARY_OFFDIAGONAL, "panel_a", "i<0|[rho(t),H]|1>"},
      {COMMSIM_PANEL_JUMP_DIAGONAL, "panel_b", "<0|L rho(t) Ldag|0>"},
      {COMMSIM_PANEL_ANTICOMMUTATOR_DIAGONAL, "panel_c",
       "-(1/2)<1|{rho(t),LdagL}|1>"},
      {COMMSIM_PANEL_ANTICOMMUTATOR_OFFDIAGONAL, "panel_d",
       "-<0|rho(t) LdagL|1>"},
  };

  ordered_json panel_files = ordered_json::object();
  for (const auto& panel : panels) {
    GridData grid;
    grid.axis1_name = "theta";
    grid.axis2_name = "t";
    grid.axis1 = thetas;
    grid.axis2 = times;
    grid.values.resize(thetas.size() * times.size());
    check(commsim_damping_landscape(
        panel.panel, config.omega, config.kappa, config.phi, thetas.data(),
        static_cast<int>(thetas.size()), times.data(),
        static_cast<int>(times.size()), component, &options,
        grid.values.data()));

    const std::string file_name =
        std::string(panel.name) + (config.format == "json" ? ".json" : ".csv");
    const std::string path =
        (fs::path(config.output_path) / file_name).string();
    if (config.format == "json") {
      Metadata meta = base_metadata(config, "damping-demo");
      meta.emplace_back("quantity", panel.quantity);
      meta.emplace_back("component", config.component);
      meta.emplace_back("omega", format_double(config.omega));
      meta.emplace_back("kappa", format_double(config.kappa));
      meta.emplace_back("phi", format_double(config.phi));
      write_output(path, grid_to_json_text(grid, meta));
    } else {
      write_output(path, grid_to_csv(grid));
    }
    panel_files[panel.name] = file_name;
  }

  // Rate-matrix report at rho(delta_t) for the chosen theta.
  const double theta = config.theta.value_or(std::numbers::pi / 2.0);
  JobConfig rate_config = config;
  rate_config.num_qubits = 1;
  rate_config.theta = theta;
  rate_config.psi0_amplitudes.reset();
  rate_config.time = config.delta_t;
  {
    char h_text[64];
    std::snprintf(h_text, sizeof(h_text), "%.17g Z0", -config.omega / 2.0);
    rate_config.hamiltonian_text = h_text;
  }
  rate_config.lindblad_texts.clear();

  const PauliPtr h_sum = parse_sum(1, rate_config.hamiltonian_text);
  const OperatorPtr h = sum_to_operator(h_sum.get());
  const StatePtr psi0 = build_psi0(rate_config);
  commsim_channel* ch = nullptr;
  check(commsim_channel_damping(config.kappa, &ch));
  const ChannelPtr channel = wrap(ch);

  MatrixData matrix;
  matrix.dim = 2;
  matrix.entries.resize(8);
  matrix.std_errors.resize(4);
  check(commsim_lindblad_rate_matrix(psi0.get(), h.get(), config.delta_t,
                                     channel.get(), &options,
                                     matrix.entries.data(),
                                     matrix.std_errors.data()));
  if (!config.sampled) matrix.std_errors.clear();

  Metadata meta = base_metadata(config, "damping-demo");
  meta.emplace_back("omega", format_double(config.omega));
  meta.emplace_back("kappa", format_double(config.kappa));
  meta.emplace_back("phi", format_double(config.phi));
  meta.emplace_back("theta", format_double(theta));
  meta.emplace_back("delta_t", format_double(config.delta_t));
  meta.emplace_back("component", config.component);
  meta.emplace_back("grid_res", std::to_string(config.grid_res));

  ordered_json doc;
  doc["meta"] = meta_json(meta);
  doc["panels"] = std::move(panel_files);
  doc["rate_matrix"] =
      ordered_json::parse(matrix_to_json_text(matrix, Metadata{}));
  write_output((fs::path(config.output_path) / "report.json").string(),
               doc.dump(2) + "\n");
}

void run_integrate(const JobConfig& config) {
  const PauliPtr h_sum = parse_sum(config.num_qubits, config.hamiltonian_text);
  const OperatorPtr h = sum_to_operator(h_sum.get());
  const StatePtr psi0 = build_psi0(config);

  // rho0 = |psi0><psi0|
  const long long dim = 1LL << config.num_qubits;
  std::vector<double> amps(2 * dim);
  check(commsim_state_amplitudes(psi0.get(), amps.data()));
  std::vector<double> rho0_entries(2 * dim * dim);
  for (long long r = 0; r < dim; ++r) {
    for (long long c = 0; c < dim; ++c) {
      const double ar = amps[2 * r], ai = amps[2 * r + 1];
      const double br = amps[2 * c], bi = amps[2 * c + 1];
      rho0_entries[2 * (r * dim + c)] = ar * br + ai * bi;
      rho0_entries[2 * (r * dim + c) + 1] = ai * br - ar * bi;
    }
  }
  commsim_operator* rho0_raw = nullptr;
  check(commsim_operator_create(dim, rho0_entries.data(), &rho0_raw));
  const OperatorPtr rho0 = wrap(rho0_raw);

  std::vector<OperatorPtr> lindblad_ops;
  std::vector<const commsim_operator*> raw_ops;
  for (const std::string& text : config.lindblad_texts) {
    const PauliPtr sum = parse_sum(config.num_qubits, text);
    lindblad_ops.push_back(sum_to_operator(sum.get()));
    raw_ops.push_back(lindblad_ops.back().get());
  }
  ChannelPtr channel = wrap(static_cast<commsim_channel*>(nullptr));
  if (!raw_ops.empty()) {
    commsim_channel* ch = nullptr;
    check(commsim_channel_create(config.num_qubits, raw_ops.data(),
                                 static_cast<int>(raw_ops.size()), &ch));
    channel = wrap(ch);
  }

  std::vector<double> sample_times = config.time_grid;
  if (sample_times.empty()) {
    const int count = 11;
    for (int i = 0; i < count; ++i) {
      sample_times.push_back(config.t_final * i / (count - 1));
    }
  }

  const int samples = static_cast<int>(sample_times.size());
  std::vector<double> states(samples * 2 * dim * dim);
  std::vector<double> defects(samples);
  check(commsim_integrate_lindblad(rho0.get(), h.get(), channel.get(),
                                   config.t_final, config.dt,
                                   sample_times.data(), samples, states.data(),
                                   defects.data()));

  Metadata meta = base_metadata(config, "integrate");
  meta.emplace_back("t_final", format_double(config.t_final));
  meta.emplace_back("dt", format_double(config.dt));
  meta.emplace_back("lindblad_operators",
                    std::to_string(config.lindblad_texts.size()));

  if (config.format == "json") {
    ordered_json doc;
    doc["meta"] = meta_json(meta);
    doc["times"] = sample_times;
    ordered_json snapshots = ordered_json::array();
    for (int s = 0; s < samples; ++s) {
      ordered_json rows = ordered_json::array();
      for (long long r = 0; r < dim; ++r) {
        ordered_json row = ordered_json::array();
        for (long long c = 0; c < dim; ++c) {
          const std::size_t k = s * 2 * dim * dim + 2 * (r * dim + c);
          row.push_back({{"re", states[k]}, {"im", states[k + 1]}});
        }
        rows.push_back(std::move(row));
      }
      snapshots.push_back(std::move(rows));
    }
    doc["states"] = std::move(snapshots);
    doc["trace_defects"] = defects;
    write_output(config.output_path, doc.dump(2) + "\n");
  } else {
    std::string csv = "t,row,col,re,im\n";
    for (int s = 0; s < samples; ++s) {
      for (long long r = 0; r < dim; ++r) {
        for (long long c = 0; c < dim; ++c) {
          const std::size_t k = s * 2 * dim * dim + 2 * (r * dim + c);
          csv += format_double(sample_times[s]) + "," + std::to_string(r) +
                 "," + std::to_string(c) + "," + format_double(states[k]) +
                 "," + format_double(states[k + 1]) + "\n";
        }
      }
    }
    write_output(config.output_path, csv);
  }
}

}  // namespace

void run_job(const JobConfig& config) {
  config.validate();
  switch (config.command) {
    case JobConfig::Command::Estimate: run_estimate(config); break;
    case JobConfig::Command::VnScan: run_vn_scan(config); break;
    case JobConfig::Command::LindbladRate: run_lindblad_rate(config); break;
    case JobConfig::Command::DampingDemo: run_damping_demo(config); break;
    case JobConfig::Command::Integrate: run_integrate(config); break;
  }
}

}  // namespace commsim_cli
