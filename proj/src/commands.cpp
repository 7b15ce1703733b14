#include "nhscat/commands.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "nhscat/analysis.hpp"
#include "nhscat/config.hpp"
#include "nhscat/csv.hpp"
#include "nhscat/dynamics.hpp"
#include "nhscat/error.hpp"
#include "nhscat/poles.hpp"
#include "nhscat/scattering.hpp"
#include "nhscat/spectrum.hpp"

namespace nhscat {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, 6> kCommands{"scatter", "poles",  "evolve",
                                                    "spectrum", "sweep", "validate"};

struct Context {
  const RunConfig& cfg;
  fs::path out_dir;
  int threads;
  std::ostream& out;
  std::ostream& err;
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

void write_json(const fs::path& path, const Json& doc) {
  std::ofstream f = open_output(path);
  f << doc.dump(2) << '\n';
}

// json stores NaN and inf as null
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json pole_json(const Pole& p) {
  const cplx e = p.energy();
  return Json{{"re_k", number(p.k.real())},
              {"im_k", number(p.k.imag())},
              {"re_E", number(e.real())},
              {"im_E", number(e.imag())},
              {"class", std::string(pole_class_name(p.kind()))}};
}

Json model_json(const CenterModel& model) {
  const Family f = family_of(model);
  return Json{{"family", std::string(family_name(f))},
              {"description", describe(model)},
              {std::string(swept_parameter_name(f)), swept_parameter(model)}};
}

std::string time_label(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", t);
  return buf;
}

std::vector<double> k_grid(const KGridConfig& g) {
  std::vector<double> ks;
  if (g.count == 1) return {g.start};
  ks.reserve(static_cast<std::size_t>(g.count));
  const double h = (g.stop - g.start) / (g.count - 1);
  for (int i = 0; i < g.count; ++i) ks.push_back(i + 1 == g.count ? g.stop : g.start + i * h);
  return ks;
}

// Closed form where it is finite; divergent points are reported as inf.
Amplitudes amplitudes_or_inf(const CenterModel& model, double k) {
  try {
    return amplitudes_closed_form(model, k);
  } catch (const DivergentAmplitudes&) {
    const double inf = std::numeric_limits<double>::infinity();
    return Amplitudes{k, {inf, 0.0}, {inf, 0.0}, {inf, 0.0}, {inf, 0.0}};
  }
}

// Requirements that only some subcommands impose; reported as config errors.
void check_requirements(std::string_view name, const RunConfig& cfg) {
  if ((name == "poles" || name == "sweep") && !cfg.sweep) {
    throw ConfigError(std::string(name) + " needs a 'sweep' section", 0, 0);
  }
  if (name == "spectrum" || (name == "evolve" && cfg.time.propagator == Propagator::Eigen)) {
    if (cfg.sites > cfg.spectrum.max_sites) {
      throw ConfigError("lattice.L = " + std::to_string(cfg.sites) +
                            " exceeds spectrum.max_L = " + std::to_string(cfg.spectrum.max_sites),
                        0, 0);
    }
  }
}

void cmd_scatter(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  std::vector<Amplitudes> rows;
  for (double k : k_grid(cfg.k_grid)) rows.push_back(amplitudes_or_inf(cfg.model, k));
  {
    std::ofstream f = open_output(ctx.out_dir / "scatter.csv");
    csv::write_scatter(f, rows);
  }
  ctx.out << "scatter: " << rows.size() << " k points -> " << (ctx.out_dir / "scatter.csv").string()
          << '\n';
  if (!cfg.sweep) return;

  std::ofstream f = open_output(ctx.out_dir / "scatter_sweep.csv");
  csv::Writer w(f, {"param", "k", "R_L", "T_L", "R_R", "T_R"});
  const std::vector<double> grid = cfg.sweep->grid();
  for (double g : grid) {
    const Coefficients c =
        coefficients(amplitudes_or_inf(with_swept_parameter(cfg.model, g), cfg.packet.k));
    w.field(g).field(cfg.packet.k).field(c.R_left).field(c.T_left).field(c.R_right).field(
        c.T_right);
    w.end_row();
  }
  ctx.out << "scatter: " << grid.size() << " sweep points -> "
          << (ctx.out_dir / "scatter_sweep.csv").string() << '\n';
}

void cmd_poles(const Context& ctx) {
  const std::vector<double> grid = ctx.cfg.sweep->grid();
  const PoleTrajectory traj = trace_pole_trajectory(ctx.cfg.model, grid);
  std::ofstream f = open_output(ctx.out_dir / "poles.csv");
  csv::write_trajectory(f, traj);
  ctx.out << "poles: " << grid.size() << " parameter values -> "
          << (ctx.out_dir / "poles.csv").string() << '\n';
}

void cmd_evolve(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const LatticeSpec lattice{cfg.sites};
  const HamiltonianMatrix h = build_finite_hamiltonian(cfg.model, lattice);
  const WavePacket packet =
      gaussian_packet(lattice, cfg.packet.center, cfg.packet.width, cfg.packet.k);
  if (packet.tail_warning) {
    ctx.err << "warning: packet amplitude on the lattice ends is " << packet.boundary_tail
            << '\n';
  }

  EvolutionResult result{lattice};
  if (cfg.time.propagator == Propagator::Eigen) {
    SpectrumOptions so;
    so.max_sites = cfg.spectrum.max_sites;
    const std::vector<double> times = recording_times(cfg.time.t_end, cfg.time.record_every);
    result = propagate_eigen(eigendecompose(h, so), packet, times);
  } else {
    StepperOptions so;
    so.dt = cfg.time.dt;
    so.t_end = cfg.time.t_end;
    so.record_every = cfg.time.record_every;
    so.auto_refine = cfg.time.auto_refine;
    result = propagate_stepper(h, packet, so);
  }

  {
    std::ofstream f = open_output(ctx.out_dir / "timeseries.csv");
    csv::write_timeseries(f, result);
  }
  for (double t : cfg.time.snapshots) {
    const auto idx = result.find_time(t);
    if (!idx) throw std::runtime_error("snapshot time " + time_label(t) + " was not recorded");
    std::ofstream f = open_output(ctx.out_dir / ("snapshot_t" + time_label(t) + ".csv"));
    const Eigen::VectorXcd& s = result.snapshots[*idx];
    csv::write_snapshot(f, {s.data(), static_cast<std::size_t>(s.size())}, lattice);
  }

  Json summary;
  summary["model"] = model_json(cfg.model);
  summary["L"] = cfg.sites;
  summary["propagator"] = cfg.time.propagator == Propagator::Eigen ? "eigen" : "stepper";
  summary["dt"] = number(result.dt);
  summary["boundary_tail"] = number(packet.boundary_tail);
  summary["initial_total"] = number(result.total_intensity.front());
  summary["final_total"] = number(result.total_intensity.back());
  double drift = 0.0;
  for (double v : result.total_intensity) drift = std::max(drift, std::abs(v - 1.0));
  summary["max_norm_drift"] = number(drift);
  if (const auto ts = separation_time(result)) {
    summary["separation_time"] = number(*ts);
  } else {
    summary["separation_time"] = nullptr;
  }
  if (cfg.time.extract_at) {
    const PacketCoefficients c = extract_RT(result, *cfg.time.extract_at);
    summary["extract"] = Json{{"t", *cfg.time.extract_at},
                              {"R_L", number(c.R_left)},
                              {"T_L", number(c.T_left)},
                              {"center", number(c.center)}};
  }
  if (cfg.time.growth_window) {
    const auto [from, to] = *cfg.time.growth_window;
    Json g{{"from", from}, {"to", to}};
    try {
      const GrowthFit fit = fit_growth_rate(result, from, to);
      g["rate"] = number(fit.rate);
      g["rate_stderr"] = number(fit.rate_stderr);
      g["r_squared"] = number(fit.r_squared);
      g["points"] = fit.points;
    } catch (const FitFailure& e) {
      g["error"] = e.what();
    }
    summary["growth"] = g;

    const Eigen::VectorXcd& last = result.snapshots.back();
    Json d{{"t", result.times.back()}};
    try {
      const DecayFit fit =
          fit_spatial_decay({last.data(), static_cast<std::size_t>(last.size())}, lattice);
      d["alpha"] = number(fit.alpha);
      d["alpha_stderr"] = number(fit.alpha_stderr);
      d["r_squared"] = number(fit.r_squared);
    } catch (const ComputationError& e) {
      d["error"] = e.what();
    }
    summary["decay"] = d;
  }
  write_json(ctx.out_dir / "evolve_summary.json", summary);
  ctx.out << "evolve: " << result.times.size() << " recorded times, final intensity "
          << result.total_intensity.back() << '\n';
}

void cmd_spectrum(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const LatticeSpec lattice{cfg.sites};
  SpectrumOptions so;
  so.max_sites = cfg.spectrum.max_sites;
  const SpectrumResult spec = eigendecompose(build_finite_hamiltonian(cfg.model, lattice), so);
  if (spec.near_exceptional) {
    ctx.err << "warning: spectrum is close to an exceptional point (min self-overlap "
            << spec.min_self_overlap << ")\n";
  }
  {
    std::ofstream f = open_output(ctx.out_dir / "eigenvalues.csv");
    csv::write_eigenvalues(f, spec);
  }
  const std::vector<BoundStateReport> bound = detect_bound_states(spec, cfg.spectrum.threshold);
  {
    std::ofstream f = open_output(ctx.out_dir / "bound_states.csv");
    csv::Writer w(f, {"n", "re_E", "im_E", "center_site", "alpha", "alpha_stderr", "r_squared",
                      "participation_ratio", "diagnostic"});
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (const BoundStateReport& b : bound) {
      w.field(static_cast<long long>(b.index))
          .field(b.energy.real())
          .field(b.energy.imag())
          .field(b.center_site)
          .field(b.decay ? b.decay->alpha : nan)
          .field(b.decay ? b.decay->alpha_stderr : nan)
          .field(b.decay ? b.decay->r_squared : nan)
          .field(b.participation_ratio)
          .field(b.diagnostic.empty() ? std::string_view("ok") : std::string_view(b.diagnostic));
      w.end_row();
    }
  }
  if (cfg.spectrum.profiles) {
    for (const BoundStateReport& b : bound) {
      const Eigen::VectorXcd psi = spec.right.col(b.index);
      std::ofstream f =
          open_output(ctx.out_dir / ("bound_state_" + std::to_string(b.index) + ".csv"));
      csv::write_profile(f, {psi.data(), static_cast<std::size_t>(psi.size())}, lattice);
    }
  }
  if (cfg.spectrum.eigenvectors) {
    std::ofstream f = open_output(ctx.out_dir / "eigenvectors.csv");
    csv::Writer w(f, {"n", "j", "re_psi", "im_psi"});
    for (Eigen::Index n = 0; n < spec.size(); ++n) {
      for (Eigen::Index i = 0; i < spec.right.rows(); ++i) {
        const cplx v = spec.right(i, n);
        w.field(static_cast<long long>(n))
            .field(lattice.site_of(static_cast<int>(i)))
            .field(v.real())
            .field(v.imag());
        w.end_row();
      }
    }
  }
  ctx.out << "spectrum: " << spec.size() << " eigenvalues, " << bound.size()
          << " with Im E > " << cfg.spectrum.threshold << '\n';
  for (const BoundStateReport& b : bound) {
    ctx.out << "  n=" << b.index << "  E = " << b.energy.real() << (b.energy.imag() < 0 ? " - " : " + ")
            << std::abs(b.energy.imag()) << "i";
    if (b.decay) ctx.out << "  alpha = " << b.decay->alpha;
    ctx.out << '\n';
  }
}

void cmd_sweep(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  SweepOptions so;
  so.sites = cfg.sites;
  so.packet = cfg.packet;
  so.t_extract = cfg.time.extract_at.value_or(cfg.time.t_end);
  so.propagator = cfg.time.propagator;
  so.dt = cfg.time.dt;
  so.threads = ctx.threads;
  const std::vector<double> grid = cfg.sweep->grid();
  const SweepReport report = sweep_ti_vs_td(cfg.model, grid, so);
  {
    std::ofstream f = open_output(ctx.out_dir / "sweep.csv");
    csv::write_sweep(f, report);
  }
  int diverged = 0;
  for (const SweepRow& r : report.rows) {
    if (r.diverged) ++diverged;
    if (!r.error.empty()) ctx.err << report.parameter << " = " << r.param << ": " << r.error << '\n';
  }
  ctx.out << "sweep: " << report.rows.size() << " points, " << diverged << " diverged\n";
}

void cmd_validate(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Verdict v = validity_verdict(cfg.model);
  Json doc;
  doc["model"] = model_json(cfg.model);
  doc["valid"] = v.valid;
  doc["critical_value"] = v.critical_value ? number(*v.critical_value) : Json(nullptr);
  doc["margin"] = v.gamma_margin ? number(*v.gamma_margin) : Json(nullptr);
  Json poles = Json::array();
  for (const Pole& p : v.all_poles) poles.push_back(pole_json(p));
  doc["poles"] = poles;
  Json growing = Json::array();
  for (const Pole& p : v.offending_poles) growing.push_back(pole_json(p));
  doc["growing_bound_states"] = growing;
  Json singular = Json::array();
  for (const Pole& p : v.spectral_singularities) singular.push_back(pole_json(p));
  doc["spectral_singularities"] = singular;
  write_json(ctx.out_dir / "validate.json", doc);

  std::ostream& os = ctx.out;
  os << describe(cfg.model) << '\n';
  os << (v.valid ? "VALID: time-independent scattering applies\n"
                 : "INVALID: time-independent scattering does not describe the dynamics\n");
  if (v.critical_value) {
    os << "critical " << swept_parameter_name(family_of(cfg.model)) << " = " << *v.critical_value
       << " (margin " << v.gamma_margin.value_or(0.0) << ")\n";
  }
  if (v.all_poles.empty()) os << "no poles at finite k\n";
  for (const Pole& p : v.all_poles) {
    const cplx e = p.energy();
    char buf[160];
    std::snprintf(buf, sizeof buf, "  k = %+.12f %+.12fi   E = %+.12f %+.12fi   %s\n", p.k.real(),
                  p.k.imag(), e.real(), e.imag(), std::string(pole_class_name(p.kind())).c_str());
    os << buf;
  }
}

using Handler = void (*)(const Context&);

Handler handler_for(std::string_view name) {
  if (name == "scatter") return cmd_scatter;
  if (name == "poles") return cmd_poles;
  if (name == "evolve") return cmd_evolve;
  if (name == "spectrum") return cmd_spectrum;
  if (name == "sweep") return cmd_sweep;
  if (name == "validate") return cmd_validate;
  return nullptr;
}

}  // namespace

std::span<const std::string_view> command_names() { return kCommands; }

int run_command(std::string_view name, const CommandOptions& options, std::ostream& out,
                std::ostream& err) {
  const Handler handler = handler_for(name);
  if (!handler) {
    err << "error: unknown subcommand '" << name << "'\n";
    return kExitConfig;
  }
  if (options.threads < 1) {
    err << "error: --threads must be >= 1\n";
    return kExitConfig;
  }

  RunConfig cfg;
  try {
    cfg = load_config(options.config);
    check_requirements(name, cfg);
  } catch (const ConfigError& e) {
    err << options.config.string() << ": " << e.what() << '\n';
    return kExitConfig;
  }

  if (options.dry_run) {
    out << name << ": configuration OK (" << describe(cfg.model) << ", L = " << cfg.sites
        << ")\n";
    return kExitOk;
  }

  const fs::path out_dir = options.out.value_or(fs::path(cfg.output));
  try {
    fs::create_directories(out_dir);
    handler(Context{cfg, out_dir, options.threads, out, err});
  } catch (const std::exception& e) {
    err << "error: " << name << ": " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitOk;
}

}  // namespace nhscat
