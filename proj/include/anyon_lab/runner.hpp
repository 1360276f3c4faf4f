#pragma once

// Command layer shared by the CLI and the tests: a RunConfig goes in, a
// Dataset and an exit code come out.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "anyon_lab/dataset.hpp"
#include "anyon_lab/dynamics.hpp"
#include "anyon_lab/entanglement.hpp"
#include "anyon_lab/model.hpp"
#include "anyon_lab/parallel.hpp"
#include "anyon_lab/thermal.hpp"
#include "anyon_lab/verify.hpp"

namespace anyon_lab {

inline constexpr const char* kArtifactVersion = "1.0.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitArgument = 1;
inline constexpr int kExitInvariant = 2;

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"spectrum", "entropy-sweep", "dynamics",
                                              "correlators", "momentum", "verify"};
  return names;
}

/// Reals with optional pi factors: "1.5", "pi", "-pi/2", "2pi", "0.25*pi".
inline double parse_real(std::string text) {
  std::erase(text, ' ');
  if (text.empty()) throw ArgumentError("empty number");
  double sign = 1.0;
  if (text[0] == '-' || text[0] == '+') {
    sign = text[0] == '-' ? -1.0 : 1.0;
    text.erase(0, 1);
  }
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ArgumentError("bad number '" + s + "'");
    }
    if (used != s.size()) throw ArgumentError("bad number '" + s + "'");
    return v;
  };
  const auto pi_at = text.find("pi");
  if (pi_at == std::string::npos) return sign * number(text);
  std::string before = text.substr(0, pi_at), after = text.substr(pi_at + 2);
  if (!before.empty() && before.back() == '*') before.pop_back();
  double value = kPi * (before.empty() ? 1.0 : number(before));
  if (!after.empty()) {
    if (after[0] != '/') throw ArgumentError("bad number '" + text + "'");
    value /= number(after.substr(1));
  }
  return sign * value;
}

/// "start:stop:count" (inclusive, uniform) or a comma-separated list.
inline std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::size_t start = 0;
  while (true) {
    const auto end = text.find(sep, start);
    parts.push_back(text.substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  std::vector<double> out;
  if (sep == ':') {
    if (parts.size() != 3) throw ArgumentError("grid '" + text + "' must be start:stop:count");
    const double a = parse_real(parts[0]), b = parse_real(parts[1]);
    const double count = parse_real(parts[2]);
    if (count < 1 || count != std::floor(count)) throw ArgumentError("grid count must be a positive integer");
    const auto n = static_cast<int>(count);
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  } else {
    for (const auto& p : parts) out.push_back(parse_real(p));
  }
  return out;
}

/// Eigenstate labels "2,5", "25" or "phi25".
inline LevelLabel parse_level_label(std::string text) {
  if (text.rfind("phi", 0) == 0) text.erase(0, 3);
  std::erase(text, '_');
  std::erase(text, '{');
  std::erase(text, '}');
  std::erase(text, ',');
  if (text.size() != 2 || !std::isdigit(static_cast<unsigned char>(text[0])) ||
      !std::isdigit(static_cast<unsigned char>(text[1]))) {
    throw ArgumentError("bad state label '" + text + "' (expected e.g. 2,5)");
  }
  const LevelLabel label{text[0] - '0', text[1] - '0'};
  static const int counts[] = {1, 4, 6, 4, 1};
  if (label.particles < 0 || label.particles > 4 || label.index < 1 || label.index > counts[label.particles]) {
    throw ArgumentError("no eigenstate phi_{" + label.str() + "}");
  }
  return label;
}

struct RunConfig {
  std::string command = "verify";
  std::optional<int> figure;
  ModelParams params;
  double beta = 1.0;
  std::vector<double> omegas{0.0, 1.0, 2.0};
  double t_max = 10.0;
  int t_steps = 400;
  std::vector<double> nu_grid;  // empty: command default
  std::vector<double> k_grid;   // empty: command default
  std::vector<std::string> states{"2,5"};
  std::string subspace = "B12";
  std::string out;
  OutputFormat format = OutputFormat::csv;
  std::uint64_t seed = 12345;

  void validate() const {
    if (std::find(command_names().begin(), command_names().end(), command) == command_names().end()) {
      throw ArgumentError("unknown command '" + command + "'");
    }
    params.validate();
    if (!std::isfinite(beta) || beta <= 0.0) throw ArgumentError("beta must be positive and finite");
    for (double om : omegas) FieldProtocol{om}.validate();
    if (!std::isfinite(t_max) || t_max < 0.0) throw ArgumentError("t-max must be finite and >= 0");
    if (t_steps < 1) throw ArgumentError("t-steps must be >= 1");
    auto monotone = [](const std::vector<double>& g, const char* name) {
      if (g.empty()) throw ArgumentError(std::string(name) + " grid is empty");
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (!std::isfinite(g[i])) throw ArgumentError(std::string(name) + " grid has a non-finite value");
        if (i > 0 && !(g[i] > g[i - 1])) throw ArgumentError(std::string(name) + " grid must be increasing");
      }
    };
    monotone(nu_grid, "nu");
    if (command == "momentum") monotone(k_grid, "k");
    if (omegas.empty()) throw ArgumentError("omega list is empty");
    if (states.empty()) throw ArgumentError("state list is empty");
    for (const auto& s : states) parse_level_label(s);
    const auto m = parse_subspace(subspace);
    if (params.sites != 2 && command != "spectrum") {
      throw UnsupportedError("command '" + command + "' needs L=2");
    }
    if (command == "entropy-sweep" || command == "dynamics") m.validate(FockBasis(2));
  }

  /// Copy with empty grids replaced by the command defaults.
  RunConfig resolved() const {
    RunConfig r = *this;
    if (r.nu_grid.empty()) {
      r.nu_grid = command == "verify" ? VerifyOptions{}.nu_grid : std::vector<double>{0.0};
      if (command == "verify") std::sort(r.nu_grid.begin(), r.nu_grid.end());
    }
    if (r.k_grid.empty() && command == "momentum") r.k_grid = parse_grid("-pi:pi:201");
    return r;
  }

  std::vector<double> times() const {
    std::vector<double> out;
    for (int i = 0; i < t_steps; ++i) out.push_back(t_steps == 1 ? 0.0 : t_max * i / (t_steps - 1));
    return out;
  }
};

inline nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = c.command;
  if (c.figure) j["figure"] = *c.figure;
  j["sites"] = c.params.sites;
  j["kappa"] = c.params.hopping;
  j["u"] = c.params.onsite;
  j["v"] = c.params.density_density;
  j["j"] = c.params.exchange;
  j["mu"] = c.params.chemical_potential;
  j["beta"] = c.beta;
  j["omega"] = c.omegas;
  j["t_max"] = c.t_max;
  j["t_steps"] = c.t_steps;
  j["nu_grid"] = c.nu_grid;
  j["k_grid"] = c.k_grid;
  j["state"] = c.states;
  j["subspace"] = c.subspace;
  j["format"] = c.format == OutputFormat::csv ? "csv" : "json";
  j["seed"] = c.seed;
  return j;
}

namespace detail {

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

inline std::vector<double> read_grid(const nlohmann::json& v) {
  if (v.is_string()) return parse_grid(v.get<std::string>());
  if (v.is_number()) return {v.get<double>()};
  std::vector<double> out;
  for (const auto& x : v) out.push_back(x.is_string() ? parse_real(x.get<std::string>()) : x.get<double>());
  return out;
}

}  // namespace detail

/// Figure presets. Later layers (config file, flags) override them.
inline void apply_figure_preset(RunConfig& c, int figure) {
  const ModelParams caption{};
  switch (figure) {
    case 2:
      c.command = "entropy-sweep";
      c.params = caption;
      c.states = {"2,5"};
      c.subspace = "B12";
      c.nu_grid = parse_grid("0:2pi:201");
      break;
    case 3:
      c.command = "dynamics";
      c.params = caption;
      c.states = {"2,2", "2,5"};
      c.subspace = "B12";
      c.nu_grid = {0.0, kPi / 2, kPi};
      c.omegas = {0.0, 1.0, 2.0};
      c.t_max = 10.0;
      c.t_steps = 400;
      break;
    case 4:
      c.command = "correlators";
      c.params = caption;
      c.beta = 1.0;
      c.nu_grid = parse_grid("0:2pi:201");
      break;
    case 5:
      c.command = "momentum";
      c.params = caption;
      c.params.chemical_potential = 10.0;
      c.beta = 1.0;
      c.nu_grid = {0.0, kPi / 4, kPi / 2, 3 * kPi / 4, kPi};
      c.k_grid = parse_grid("-pi:pi:201");
      break;
    default:
      throw ArgumentError("figure must be 2, 3, 4 or 5");
  }
  c.figure = figure;
}

/// Applies a JSON config (or the "config" member of a dataset's metadata).
/// A "figure" key applies that preset first unless `use_figure` is false.
inline void apply_json(RunConfig& c, const nlohmann::json& input, bool use_figure = true) {
  const nlohmann::json& j = (input.contains("config") && input.at("config").is_object()) ? input.at("config") : input;
  try {
    if (use_figure && j.contains("figure")) apply_figure_preset(c, j.at("figure").get<int>());
    detail::read_if(j, "command", c.command);
    detail::read_if(j, "sites", c.params.sites);
    detail::read_if(j, "kappa", c.params.hopping);
    detail::read_if(j, "u", c.params.onsite);
    detail::read_if(j, "v", c.params.density_density);
    detail::read_if(j, "j", c.params.exchange);
    detail::read_if(j, "mu", c.params.chemical_potential);
    detail::read_if(j, "beta", c.beta);
    detail::read_if(j, "t_max", c.t_max);
    detail::read_if(j, "t_steps", c.t_steps);
    detail::read_if(j, "subspace", c.subspace);
    detail::read_if(j, "out", c.out);
    detail::read_if(j, "seed", c.seed);
    if (j.contains("omega")) c.omegas = detail::read_grid(j.at("omega"));
    if (j.contains("nu")) c.nu_grid = detail::read_grid(j.at("nu"));
    if (j.contains("nu_grid")) c.nu_grid = detail::read_grid(j.at("nu_grid"));
    if (j.contains("k_grid")) c.k_grid = detail::read_grid(j.at("k_grid"));
    if (j.contains("state")) {
      const auto& s = j.at("state");
      c.states = s.is_string() ? std::vector<std::string>{s.get<std::string>()} : s.get<std::vector<std::string>>();
    }
    if (j.contains("format")) c.format = parse_format(j.at("format").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("config: ") + e.what());
  }
}

struct RunResult {
  Dataset data;
  int exit_code = kExitOk;
  std::string summary;  // human-readable, for stderr
};

namespace detail {

inline Dataset make_dataset(const RunConfig& c, std::vector<Column> columns) {
  Dataset d(std::move(columns));
  d.meta()["artifact"] = "anyon_lab";
  d.meta()["version"] = kArtifactVersion;
  d.meta()["config"] = to_json(c);
  return d;
}

inline ModelParams at_nu(const RunConfig& c, double nu) {
  ModelParams p = c.params;
  p.statistics = nu;
  return p;
}

inline Dataset run_spectrum(const RunConfig& c) {
  auto d = make_dataset(c, {{"nu", "rad"}, {"particles", ""}, {"two_sz", ""}, {"level", ""}, {"energy", ""},
                            {"energy_closed", ""}});
  d.meta()["tolerances"] = {{"hermitian", 1e-10}};
  const FockBasis basis(c.params.sites);
  std::vector<std::vector<std::vector<Cell>>> per_nu(c.nu_grid.size());
  parallel_for(c.nu_grid.size(), [&](std::size_t i) {
    const double nu = c.nu_grid[i];
    const auto p = at_nu(c, nu);
    const auto spec = diagonalize_by_sector(build_hamiltonian(p, basis), basis);
    std::map<SectorKey, std::vector<ClosedLevel>> closed;
    if (p.sites == 2) {
      for (const auto& l : closed_form_spectrum(p)) closed[l.sector].push_back(l);
      for (auto& [key, levels] : closed) {
        std::stable_sort(levels.begin(), levels.end(),
                         [](const ClosedLevel& a, const ClosedLevel& b) { return a.energy < b.energy; });
      }
    }
    std::map<SectorKey, std::size_t> used;
    for (Eigen::Index n = 0; n < spec.eigenvalues.size(); ++n) {
      const SectorKey key = spec.sectors[static_cast<std::size_t>(n)];
      std::string level = "-";
      double energy_closed = std::nan("");
      if (auto it = closed.find(key); it != closed.end()) {
        const auto& lvl = it->second.at(used[key]++);
        level = lvl.label.str();
        energy_closed = lvl.energy;
      }
      per_nu[i].push_back({nu, static_cast<long long>(key.particles), static_cast<long long>(key.two_sz), level,
                           spec.eigenvalues(n), energy_closed});
    }
  });
  for (auto& rows : per_nu) {
    for (auto& r : rows) d.add_row(std::move(r));
  }
  return d;
}

inline Dataset run_entropy_sweep(const RunConfig& c) {
  auto d = make_dataset(c, {{"nu", "rad"}, {"state", ""}, {"subspace", ""}, {"entropy", "bit"},
                            {"entropy_svd", "bit"}, {"entropy_closed", "bit"}});
  d.meta()["tolerances"] = {{"svd_vs_eigen", 1e-10}, {"closed_form", 1e-10}};
  const FockBasis basis(2);
  const auto m = parse_subspace(c.subspace);
  std::vector<std::vector<std::vector<Cell>>> per_nu(c.nu_grid.size());
  parallel_for(c.nu_grid.size(), [&](std::size_t i) {
    const double nu = c.nu_grid[i];
    const auto p = at_nu(c, nu);
    for (const auto& s : c.states) {
      const auto label = parse_level_label(s);
      const Vector phi = closed_form_eigenvector(p, basis, label);
      double eig = std::nan(""), svd = std::nan("");
      try {
        eig = von_neumann_entropy(reduced_density_matrix(phi, m, nu, basis));
        if (label.particles == 2) svd = entropy_via_svd(phi, m, nu, basis);
      } catch (const NoSupportError&) {
      }
      const auto closed = closed_form_entropy(p, label, m.label);
      per_nu[i].push_back({nu, label.str(), m.name(), eig, svd, closed.value_or(std::nan(""))});
    }
  });
  for (auto& rows : per_nu) {
    for (auto& r : rows) d.add_row(std::move(r));
  }
  return d;
}

inline Dataset run_dynamics(const RunConfig& c) {
  auto d = make_dataset(c, {{"nu", "rad"}, {"omega", ""}, {"state", ""}, {"t", ""}, {"entropy", "bit"},
                            {"status", ""}});
  const FockBasis basis(2);
  const auto m = parse_subspace(c.subspace);
  const auto times = c.times();
  struct Job {
    double nu, omega;
    std::string state;
  };
  std::vector<Job> jobs;
  for (double nu : c.nu_grid) {
    for (double om : c.omegas) {
      for (const auto& s : c.states) jobs.push_back({nu, om, s});
    }
  }
  std::vector<std::vector<EntropyPoint>> series(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const auto p = at_nu(c, jobs[i].nu);
    const Vector phi0 = closed_form_eigenvector(p, basis, parse_level_label(jobs[i].state));
    series[i] = entropy_vs_time(phi0, m, p, jobs[i].omega, times, basis);
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    for (const auto& pt : series[i]) {
      d.add_row({jobs[i].nu, jobs[i].omega, parse_level_label(jobs[i].state).str(), pt.t, pt.entropy,
                 pt.error ? std::string("no-support") : std::string("ok")});
    }
  }
  return d;
}

inline std::string pair_column(const PairIndex& idx) {
  return "g2_" + idx.modes[0].label() + idx.modes[1].label() + "_" + idx.modes[2].label() + idx.modes[3].label();
}

inline Dataset run_correlators(const RunConfig& c) {
  const auto pairs = distinct_pair_indices();
  std::vector<Column> cols{{"nu", "rad"}, {"Z", ""}, {"g1_1u1u_re", ""}, {"g1_1u1u_im", ""},
                           {"g1_1u2u_re", ""}, {"g1_1u2u_im", ""}};
  for (const auto& idx : pairs) {
    cols.push_back({pair_column(idx) + "_re", ""});
    cols.push_back({pair_column(idx) + "_im", ""});
  }
  cols.push_back({"closed_form_max_dev", ""});
  auto d = make_dataset(c, std::move(cols));
  d.meta()["tolerances"] = {{"closed_form", 1e-10}};
  const FockBasis basis(2);
  std::vector<std::vector<Cell>> rows(c.nu_grid.size());
  parallel_for(c.nu_grid.size(), [&](std::size_t i) {
    const double nu = c.nu_grid[i];
    const ThermalParams tp{c.beta, at_nu(c, nu)};
    const ThermalEnsemble ens(tp, basis);
    const Matrix g1 = one_particle_density(ens);
    double dev = std::abs(ens.partition_function() - partition_function_closed(tp)) / ens.partition_function();
    dev = std::max(dev, max_abs(g1 - one_particle_density_closed(tp)));
    std::vector<Cell> row{nu, ens.partition_function(), g1(0, 0).real(), g1(0, 0).imag(), g1(0, 2).real(),
                          g1(0, 2).imag()};
    for (const auto& [idx, value] : pair_correlation_closed_table(tp)) {
      dev = std::max(dev, std::abs(pair_correlation(ens, idx) - value));
    }
    for (const auto& idx : pairs) {
      const Complex g = pair_correlation(ens, idx);
      row.push_back(g.real());
      row.push_back(g.imag());
    }
    row.push_back(dev);
    rows[i] = std::move(row);
  });
  for (auto& r : rows) d.add_row(std::move(r));
  return d;
}

inline Dataset run_momentum(const RunConfig& c) {
  auto d = make_dataset(c, {{"nu", "rad"}, {"k", "rad"}, {"n_up", ""}, {"n_down", ""}});
  const FockBasis basis(2);
  std::vector<std::vector<std::vector<Cell>>> per_nu(c.nu_grid.size());
  parallel_for(c.nu_grid.size(), [&](std::size_t i) {
    const double nu = c.nu_grid[i];
    const Matrix g1 = one_particle_density(ThermalEnsemble({c.beta, at_nu(c, nu)}, basis));
    const auto up_n = quasimomentum_distribution(g1, Spin::up, 2, c.k_grid);
    const auto dn_n = quasimomentum_distribution(g1, Spin::down, 2, c.k_grid);
    for (std::size_t k = 0; k < up_n.size(); ++k) {
      per_nu[i].push_back({nu, up_n[k].k, up_n[k].occupation, dn_n[k].occupation});
    }
  });
  for (auto& rows : per_nu) {
    for (auto& r : rows) d.add_row(std::move(r));
  }
  return d;
}

inline RunResult run_verify(const RunConfig& c) {
  auto d = make_dataset(c, {{"check", ""}, {"max_deviation", ""}, {"tolerance", ""}, {"passed", ""}});
  VerifyOptions opt;
  opt.params = c.params;
  opt.beta = c.beta;
  opt.seed = c.seed;
  opt.nu_grid = c.nu_grid;
  RunResult result;
  double worst_ratio = 0.0;
  int failures = 0;
  for (const auto& check : run_invariant_suite(opt)) {
    d.add_row({check.name, check.deviation, check.tolerance, static_cast<long long>(check.passed())});
    worst_ratio = std::max(worst_ratio, check.deviation / check.tolerance);
    if (!check.passed()) ++failures;
  }
  result.summary = failures == 0 ? "verify: all checks passed" : "verify: " + std::to_string(failures) + " check(s) failed";
  result.exit_code = failures == 0 ? kExitOk : kExitInvariant;
  result.data = std::move(d);
  return result;
}

}  // namespace detail

/// Validates the configuration and runs it. Argument problems surface as
/// exceptions (ArgumentError / UnsupportedError); the caller maps them to
/// exit code 1.
inline RunResult run(const RunConfig& config) {
  const RunConfig c = config.resolved();
  c.validate();
  if (c.command == "verify") return detail::run_verify(c);
  RunResult r;
  if (c.command == "spectrum") r.data = detail::run_spectrum(c);
  if (c.command == "entropy-sweep") r.data = detail::run_entropy_sweep(c);
  if (c.command == "dynamics") r.data = detail::run_dynamics(c);
  if (c.command == "correlators") r.data = detail::run_correlators(c);
  if (c.command == "momentum") r.data = detail::run_momentum(c);
  r.summary = c.command + ": " + std::to_string(r.data.rows().size()) + " rows";
  return r;
}

}  // namespace anyon_lab
