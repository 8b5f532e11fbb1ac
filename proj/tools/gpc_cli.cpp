// Command-line front end.
//
// Exit codes: 0 ok, 1 usage or configuration error, 2 runtime failure. Every
// failure prints one line per problem to stderr:
//   error: kind=<Kind> [line=<n>] [key=<key>] message="<text>"

#include "gpc/analysis.hpp"
#include "gpc/config.hpp"
#include "gpc/errors.hpp"
#include "gpc/experiment.hpp"
#include "gpc/verify.hpp"
#include "gpc/vtk.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kUsage = 1;
constexpr int kRuntime = 2;

std::string quote(std::string s) {
  for (char& c : s)
    if (c == '"' || c == '\n') c = '\'';
  return "\"" + s + "\"";
}

void error_line(const std::string& kind, const std::string& message) {
  std::cerr << "error: kind=" << kind << " message=" << quote(message) << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gpc::Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

int cmd_run(const std::string& path, const std::string& out_dir) {
  gpc::RunConfig cfg = gpc::parse_config(read_file(path));
  if (!out_dir.empty()) cfg.output.directory = out_dir;

  std::cout << "run " << cfg.name << ": " << cfg.block.nx << "x" << cfg.block.ny << "x"
            << cfg.block.nz << " elements, internal length " << fmt(cfg.material.internal_length())
            << '\n';
  const gpc::RunResult r = gpc::run_experiment(cfg, [](const gpc::StepRecord& s) {
    std::cout << "step " << s.step << " iterations " << s.iterations << " residual "
              << fmt(s.residuals.back()) << " energy " << fmt(s.energy)
              << (s.converged ? "" : " NOT CONVERGED") << '\n';
  });

  std::filesystem::create_directories(cfg.output.directory);
  const std::filesystem::path base =
      std::filesystem::path(cfg.output.directory) / cfg.output.prefix;
  if (cfg.output.vtk) gpc::export_vtk(*r.mesh, r.snapshot, base.string() + ".vtk", cfg.name);
  if (cfg.output.csv) {
    std::ofstream rep(base.string() + "_report.csv");
    gpc::write_report_csv(r.report, rep);
    std::ofstream cells(base.string() + "_cells.csv");
    gpc::write_cell_csv(r.snapshot, cells);
    if (!rep || !cells) throw gpc::Error("cannot write CSV output under '" + base.string() + "'");
  }

  std::cout << "converged " << (r.report.converged() ? "true" : "false") << '\n'
            << "energy " << fmt(r.report.final_energy()) << '\n'
            << "bands " << r.bands.band_count << '\n'
            << "band_width " << fmt(r.bands.mean_band_width) << '\n';
  if (!r.report.converged()) {
    error_line("NoConvergence", "load step " + std::to_string(r.report.steps.back().step) +
                                    " did not converge");
    return kRuntime;
  }
  return 0;
}

int cmd_check_tangent(const std::string& path, int samples, std::uint64_t seed) {
  const gpc::RunConfig cfg = gpc::parse_config(read_file(path));
  const gpc::TangentCheck c = gpc::check_tangent(cfg.material, samples, seed);
  std::cout << "samples " << c.samples << '\n'
            << "P " << fmt(c.P) << '\n'
            << "S_m " << fmt(c.S_m) << '\n'
            << "mu " << fmt(c.mu) << '\n'
            << "D_uu " << fmt(c.d_uu) << '\n'
            << "D_uchi " << fmt(c.d_uchi) << '\n'
            << "D_chichi " << fmt(c.d_chichi) << '\n';
  if (!(c.worst() <= 1e-5)) {
    error_line("TangentMismatch", "largest relative error " + fmt(c.worst()) + " exceeds 1e-5");
    return kRuntime;
  }
  return 0;
}

int cmd_probe(double eps) {
  const gpc::ProbeResult r = gpc::rank_one_probe_stvk(gpc::Tensor2::diagonal(eps, eps, 1.0),
                                                      gpc::Vec3::UnitX(), gpc::Vec3::UnitY());
  std::cout << fmt(r.curvature) << ' ' << (r.violating ? "violating" : "not violating") << '\n';
  return 0;
}

int cmd_gap(double eps) {
  const gpc::LaminateGap g = gpc::stvk_laminate_gap(eps);
  std::cout << "W_hom " << fmt(g.w_hom) << '\n'
            << "W_lam " << fmt(g.w_lam) << '\n'
            << "gap " << fmt(g.gap) << '\n';
  return 0;
}

int cmd_preset(const std::string& name, const std::string& out) {
  const gpc::RunConfig cfg = gpc::preset(name);
  std::ostringstream text;
  text << "# preset " << name << ", internal length l = " << fmt(cfg.material.internal_length())
       << '\n'
       << gpc::serialize(cfg);
  if (out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream os(out);
    os << text.str();
    if (!os) throw gpc::Error("cannot write '" + out + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient-polyconvex hyperelasticity solver"};
  app.require_subcommand(1);

  std::string config_path, out_dir, preset_name, preset_out;
  int samples = 100;
  std::uint64_t seed = 1;
  double eps = 0.0;

  auto* run = app.add_subcommand("run", "Solve a configuration and write VTK and CSV output");
  run->add_option("config", config_path, "configuration file")->required();
  run->add_option("--out", out_dir, "output directory (overrides output.directory)");

  auto* tangent = app.add_subcommand("check-tangent",
                                     "Finite-difference check of stresses and tangents");
  tangent->add_option("config", config_path, "configuration file")->required();
  tangent->add_option("--samples", samples, "number of random states")->check(CLI::PositiveNumber);
  tangent->add_option("--seed", seed, "random seed");

  auto* probe = app.add_subcommand("probe-stvk", "Rank-one probe of W0 = |C - I|^2 at diag(eps, eps, 1)");
  probe->add_option("--eps", eps, "stretch")->required();

  auto* gap = app.add_subcommand("gap", "Laminate energy gap of W0 = |C - I|^2");
  gap->add_option("--eps", eps, "stretch")->required();

  auto* pre = app.add_subcommand("preset", "Print a preset configuration");
  pre->add_option("name", preset_name, "preset name")
      ->required()
      ->check(CLI::IsMember(gpc::preset_names()));
  pre->add_option("-o,--output", preset_out, "write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_line("Usage", e.what());
    return kUsage;
  }

  try {
    if (*run) return cmd_run(config_path, out_dir);
    if (*tangent) return cmd_check_tangent(config_path, samples, seed);
    if (*probe) return cmd_probe(eps);
    if (*gap) return cmd_gap(eps);
    if (*pre) return cmd_preset(preset_name, preset_out);
  } catch (const gpc::ConfigError& e) {
    for (const auto& is : e.issues()) {
      std::cerr << "error: kind=" << gpc::to_string(is.kind);
      if (is.line > 0) std::cerr << " line=" << is.line;
      if (!is.key.empty()) std::cerr << " key=" << is.key;
      std::cerr << " message=" << quote(is.message) << '\n';
    }
    return kUsage;
  } catch (const gpc::InvalidParameter& e) {
    error_line("InvalidParameter", e.what());
    return kUsage;
  } catch (const gpc::LaminateUndefined& e) {
    error_line("LaminateUndefined", e.what());
    return kRuntime;
  } catch (const gpc::NoConvergence& e) {
    error_line("NoConvergence", e.what());
    return kRuntime;
  } catch (const gpc::LinearSolveFailure& e) {
    error_line("LinearSolveFailure", e.what());
    return kRuntime;
  } catch (const std::exception& e) {
    error_line("Error", e.what());
    return kRuntime;
  }
  return kUsage;
}
