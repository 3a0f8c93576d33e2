#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gfl/exponents.hpp"
#include "gfl/fractal.hpp"
#include "gfl/harness.hpp"
#include "gfl/kernels.hpp"
#include "gfl/sampler.hpp"

namespace {

struct CommonOpts {
  std::string config_file;
  std::string preset_name;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_format = true) {
  auto* cfg = cmd->add_option("--config", o.config_file, "experiment config JSON file");
  auto* pre = cmd->add_option("--preset", o.preset_name, "built-in preset name");
  cfg->excludes(pre);
  cmd->add_option("--seed", o.seed, "override the config's seed list with this one seed");
  cmd->add_option("--out", o.out, "output directory");
  if (with_format)
    cmd->add_option("--format", o.format, "report format")
        ->check(CLI::IsMember({"json", "csv", "plotdata"}));
}

gfl::ExperimentConfig load_config(const CommonOpts& o) {
  gfl::ExperimentConfig cfg;
  if (!o.preset_name.empty()) {
    cfg = gfl::preset(o.preset_name);
  } else if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    if (!in) throw std::runtime_error("cannot open config file: " + o.config_file);
    nlohmann::json j;
    in >> j;
    cfg = gfl::ExperimentConfig::from_json(j);
  } else {
    throw std::invalid_argument("one of --config or --preset is required");
  }
  if (o.seed) cfg.seeds = {*o.seed};
  cfg.out_dir = o.out;
  return cfg;
}

gfl::ReportFormat parse_format(const std::string& s) {
  if (s == "json") return gfl::ReportFormat::json;
  if (s == "csv") return gfl::ReportFormat::csv;
  return gfl::ReportFormat::plotdata;
}

nlohmann::json finite_or_string(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

int cmd_simulate(const CommonOpts& o, const std::string& sim_format) {
  gfl::ExperimentConfig cfg = load_config(o);
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + o.out);
  for (auto seed : cfg.seeds) {
    gfl::SamplePath path = gfl::config_sample(cfg, seed);
    std::string base = o.out + "/" + cfg.name + "_seed" + std::to_string(seed);
    if (sim_format == "binary")
      gfl::export_binary(path, base + ".bin");
    else
      gfl::export_csv(path, base + ".csv");
    std::cout << base << (sim_format == "binary" ? ".bin" : ".csv") << "\n";
  }
  return 0;
}

int cmd_exponent(const CommonOpts& o) {
  gfl::ExperimentConfig cfg = load_config(o);
  gfl::IncrementKernel kernel = gfl::config_kernel(cfg);
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t0 : cfg.t0_list) {
    gfl::ExponentEstimate est = gfl::kernel_exponents(
        kernel, t0, cfg.rho_ladder, cfg.pairs_per_rho, cfg.seeds.front());
    out.push_back({{"t0", t0},
                   {"alpha_tilde_hat", finite_or_string(est.alpha_tilde_hat)},
                   {"alpha_under_hat", finite_or_string(est.alpha_under_hat)},
                   {"inf_drift", est.inf_drift},
                   {"sup_drift", est.sup_drift},
                   {"pair_count", est.pair_count},
                   {"floored_pairs", est.floored_pairs}});
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_dimension(const CommonOpts& o) {
  gfl::ExperimentConfig cfg = load_config(o);
  if (cfg.scale_ladder.empty())
    throw std::invalid_argument("config has no scale_ladder; nothing to measure");
  nlohmann::json out = nlohmann::json::array();
  for (auto seed : cfg.seeds) {
    gfl::SamplePath path = gfl::config_sample(cfg, seed);
    if (cfg.localized_rho) {
      for (const auto& t0 : cfg.t0_list) {
        gfl::SamplePath sub = gfl::restrict_ball(path, {t0, *cfg.localized_rho});
        gfl::WindowPolicy policy = cfg.window;
        if (policy.delta_floor <= 0.0)
          policy.delta_floor = gfl::recommended_graph_floor(sub);
        auto loc = gfl::localized_dimension(path, t0, {*cfg.localized_rho},
                                            gfl::DimTarget::graph, cfg.scale_ladder,
                                            policy);
        gfl::DimensionEstimate re = gfl::config_range_dimension(sub);
        out.push_back({{"seed", seed},
                       {"t0", t0},
                       {"rho", *cfg.localized_rho},
                       {"graph_dim", loc.front().second.slope},
                       {"graph_r2", loc.front().second.r2},
                       {"range_dim", re.slope}});
      }
    } else {
      gfl::DimensionEstimate ge = gfl::config_graph_dimension(cfg, path);
      gfl::DimensionEstimate re = gfl::config_range_dimension(path);
      out.push_back({{"seed", seed},
                     {"graph_dim", ge.slope},
                     {"graph_r2", ge.r2},
                     {"range_dim", re.slope},
                     {"range_r2", re.r2}});
    }
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_verify(const CommonOpts& o) {
  gfl::ExperimentConfig cfg = load_config(o);
  gfl::TheoremReport rep = gfl::run_experiment(cfg);
  gfl::emit_report(rep, gfl::ReportFormat::json, cfg.out_dir);
  for (std::size_t i = 0; i < rep.cases.size(); ++i) {
    const auto& c = rep.cases[i];
    std::cout << "case " << i << ": order=" << (c.order_ok ? "ok" : "FAIL")
              << " sandwich=" << (c.sandwich_ok ? "ok" : "FAIL");
    if (!c.graph_dims.empty())
      std::cout << " graph=" << (c.graph_ok ? "ok" : "FAIL")
                << " (median " << c.graph_median << ", predicted ["
                << c.bounds.graph_lo << ", " << c.bounds.graph_hi << "])"
                << " range=" << (c.range_ok ? "ok" : "FAIL") << " (median "
                << c.range_median << ")";
    std::cout << "\n";
  }
  std::cout << (rep.all_ok ? "VERIFY PASS" : "VERIFY FAIL") << "\n";
  return rep.all_ok ? 0 : 1;
}

int cmd_report(const CommonOpts& o) {
  gfl::ExperimentConfig cfg = load_config(o);
  gfl::TheoremReport rep = gfl::run_experiment(cfg);
  gfl::emit_report(rep, parse_format(o.format), cfg.out_dir);
  std::cout << "report written to " << cfg.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-field local regularity and fractal dimension toolkit"};
  app.require_subcommand(1);

  CommonOpts sim_opts, exp_opts, dim_opts, ver_opts, rep_opts;
  std::string sim_format = "csv";

  auto* sim = app.add_subcommand("simulate", "sample field realizations to files");
  add_common(sim, sim_opts, false);
  sim->add_option("--format", sim_format, "sample output format")
      ->check(CLI::IsMember({"csv", "binary"}));

  auto* exp = app.add_subcommand("exponent", "estimate local exponents from the kernel");
  add_common(exp, exp_opts, false);

  auto* dim = app.add_subcommand("dimension", "measure box dimensions of sampled paths");
  add_common(dim, dim_opts, false);

  auto* ver = app.add_subcommand("verify", "run the experiment and check dimension bounds");
  add_common(ver, ver_opts, false);

  auto* rep = app.add_subcommand("report", "run the experiment and emit a report");
  add_common(rep, rep_opts);

  auto* pre = app.add_subcommand("presets", "list built-in presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (pre->parsed()) {
      for (const auto& n : gfl::preset_names()) std::cout << n << "\n";
      return 0;
    }
    if (sim->parsed()) return cmd_simulate(sim_opts, sim_format);
    if (exp->parsed()) return cmd_exponent(exp_opts);
    if (dim->parsed()) return cmd_dimension(dim_opts);
    if (ver->parsed()) return cmd_verify(ver_opts);
    if (rep->parsed()) return cmd_report(rep_opts);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
