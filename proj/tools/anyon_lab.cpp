#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "anyon_lab/runner.hpp"

namespace {

using anyon_lab::RunConfig;

struct Flags {
  std::string kappa, u, v, j, mu, nu, nu_grid, beta, omega, t_max, k_grid, subspace, format, out, config;
  std::vector<std::string> states;
  int t_steps = 0, figure = 0, sites = 0;
  std::uint64_t seed = 0;
};

bool given(const CLI::App& app, const std::string& name) { return app.count(name) > 0; }

RunConfig build_config(const CLI::App& app, const Flags& f, const std::string& command) {
  RunConfig c;
  if (given(app, "--figure")) anyon_lab::apply_figure_preset(c, f.figure);
  if (given(app, "--config")) {
    std::ifstream in(f.config);
    if (!in) throw anyon_lab::ArgumentError("cannot read config file '" + f.config + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw anyon_lab::ArgumentError("config file '" + f.config + "': " + e.what());
    }
    anyon_lab::apply_json(c, j, !given(app, "--figure"));
  }
  if (!command.empty()) c.command = command;

  using anyon_lab::parse_grid;
  using anyon_lab::parse_real;
  if (given(app, "--sites")) c.params.sites = f.sites;
  if (given(app, "--kappa")) c.params.hopping = parse_real(f.kappa);
  if (given(app, "--u")) c.params.onsite = parse_real(f.u);
  if (given(app, "--v")) c.params.density_density = parse_real(f.v);
  if (given(app, "--j")) c.params.exchange = parse_real(f.j);
  if (given(app, "--mu")) c.params.chemical_potential = parse_real(f.mu);
  if (given(app, "--nu")) c.nu_grid = parse_grid(f.nu);
  if (given(app, "--nu-grid")) c.nu_grid = parse_grid(f.nu_grid);
  if (given(app, "--beta")) c.beta = parse_real(f.beta);
  if (given(app, "--omega")) c.omegas = parse_grid(f.omega);
  if (given(app, "--t-max")) c.t_max = parse_real(f.t_max);
  if (given(app, "--t-steps")) c.t_steps = f.t_steps;
  if (given(app, "--k-grid")) c.k_grid = parse_grid(f.k_grid);
  if (given(app, "--state")) c.states = f.states;
  if (given(app, "--subspace")) c.subspace = f.subspace;
  if (given(app, "--format")) c.format = anyon_lab::parse_format(f.format);
  if (given(app, "--out")) c.out = f.out;
  if (given(app, "--seed")) c.seed = f.seed;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact two-site anyonic Hubbard model: spectra, entanglement, dynamics, correlators"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  Flags f;

  app.add_option("--sites", f.sites, "Number of sites L (spectrum only; others need L=2)");
  app.add_option("--kappa", f.kappa, "Hopping amplitude");
  app.add_option("--u", f.u, "On-site interaction U");
  app.add_option("--v", f.v, "Nearest-neighbour density interaction V");
  app.add_option("--j", f.j, "Exchange J");
  app.add_option("--mu", f.mu, "Chemical potential");
  app.add_option("--nu", f.nu, "Statistics parameter (single value or list; 'pi' allowed)");
  app.add_option("--nu-grid", f.nu_grid, "Statistics grid: start:stop:count or comma list");
  app.add_option("--beta", f.beta, "Inverse temperature");
  app.add_option("--omega", f.omega, "Field strength(s), comma list");
  app.add_option("--t-max", f.t_max, "End of the time window");
  app.add_option("--t-steps", f.t_steps, "Number of time points");
  app.add_option("--state", f.states, "Eigenstate label such as 2,5 (repeatable)");
  app.add_option("--subspace", f.subspace, "B1, B2, B12 or a mode list like 1u,2d");
  app.add_option("--k-grid", f.k_grid, "Momentum grid: start:stop:count or comma list");
  app.add_option("--figure", f.figure, "Figure preset 2, 3, 4 or 5");
  app.add_option("--format", f.format, "csv or json");
  app.add_option("--out", f.out, "Output file (default stdout)");
  app.add_option("--seed", f.seed, "Random seed for the verify suite");
  app.add_option("--config", f.config, "JSON config file; flags override it");

  std::vector<CLI::App*> subs;
  subs.push_back(app.add_subcommand("spectrum", "Tagged eigenvalues versus nu"));
  subs.push_back(app.add_subcommand("entropy-sweep", "Entanglement entropy of an eigenstate versus nu"));
  subs.push_back(app.add_subcommand("dynamics", "Entropy versus time in a field"));
  subs.push_back(app.add_subcommand("correlators", "Partition function, g1 and g2 versus nu"));
  subs.push_back(app.add_subcommand("momentum", "Quasi-momentum distribution per nu"));
  subs.push_back(app.add_subcommand("verify", "Run the invariant suite"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return anyon_lab::kExitArgument;
  }

  std::string command;
  for (auto* s : subs) {
    if (s->parsed()) command = s->get_name();
  }
  if (command.empty() && !given(app, "--figure") && !given(app, "--config")) {
    std::cerr << app.help() << "\nerror: a command or --figure is required\n";
    return anyon_lab::kExitArgument;
  }

  try {
    const RunConfig config = build_config(app, f, command);
    const auto result = anyon_lab::run(config);
    if (config.out.empty()) {
      result.data.write(std::cout, config.format);
    } else {
      result.data.save(config.out, config.format);
    }
    std::cerr << result.summary << "\n";
    if (config.command == "verify") {
      for (const auto& row : result.data.rows()) {
        std::cerr << "  " << (std::get<long long>(row[3]) ? "ok   " : "FAIL ") << std::get<std::string>(row[0])
                  << ": " << anyon_lab::format_number(std::get<double>(row[1])) << " (tol "
                  << anyon_lab::format_number(std::get<double>(row[2])) << ")\n";
      }
    }
    return result.exit_code;
  } catch (const anyon_lab::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return anyon_lab::kExitArgument;
  } catch (const anyon_lab::UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return anyon_lab::kExitArgument;
  }
}
