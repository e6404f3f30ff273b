#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eyeorbit/analysis.hpp"
#include "eyeorbit/errors.hpp"
#include "eyeorbit/scene.hpp"
#include "eyeorbit/simulation.hpp"
#include "eyeorbit/trajectory.hpp"

using namespace eyeorbit;

namespace {

constexpr double kMarginTolerance = 1e-6;
constexpr double kJacobianTolerance = 1e-5;

int run_simulate(const std::string& scene_path, const std::string& trajectory,
                 const std::string& mode_text, std::optional<double> dt,
                 double duration, const std::string& out) {
  SceneConfig scene = load_scene(scene_path);
  if (dt) {
    if (!(*dt > 0.0)) throw ConfigurationError("--dt must be positive");
    scene.dt = *dt;
  }
  const ControlMode mode = parse_mode(mode_text);
  const TrajectorySpec traj =
      trajectory.rfind("circle:", 0) == 0
          ? TrajectorySpec(parse_circle(trajectory, scene))
          : TrajectorySpec(load_waypoints(trajectory));
  const SimLog log = run_trajectory(scene, traj, mode, duration);
  log.write_csv(out);

  std::printf("%zu steps, mode %s, log %s\n", log.records.size(),
              log.mode.c_str(), out.c_str());
  const double worst = log.worst_margin();
  if (worst < -kMarginTolerance) {
    std::fprintf(stderr, "invariant violated: margin_%s reached %.6g\n",
                 log.worst_margin_name().c_str(), worst);
    return 3;
  }
  if (mode == ControlMode::orbital) {
    const Simulator probe(scene, mode);
    const double band = scene.constraints.orbital_d_safe + kMarginTolerance;
    for (const StepRecord& r : log.records) {
      if (std::abs(r.D_om - probe.D_init()) > band) {
        std::fprintf(stderr,
                     "invariant violated: |D_OM - D_init| = %.6g > D_safe at "
                     "t = %.6g s\n",
                     std::abs(r.D_om - probe.D_init()), r.time);
        return 3;
      }
    }
  }
  return 0;
}

int run_check_jacobians(const std::string& scene_path, int samples,
                        std::uint64_t seed) {
  const SceneConfig scene = load_scene(scene_path);
  const auto start = std::chrono::steady_clock::now();
  const JacobianCheckResult result = check_jacobians(scene, samples, seed);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::printf("%d samples (%d rejected), %.3f s\n", result.samples,
              result.rejected, seconds);
  const JacobianCheckEntry* worst = nullptr;
  for (const JacobianCheckEntry& e : result.entries) {
    std::printf("  %-20s %.3e\n", e.name.c_str(), e.max_error);
    if (!worst || e.max_error > worst->max_error) worst = &e;
  }
  if (worst && worst->max_error > kJacobianTolerance) {
    std::fprintf(stderr,
                 "invariant violated: Jacobian %s differs from finite "
                 "differences by %.3e\n",
                 worst->name.c_str(), worst->max_error);
    return 3;
  }
  return 0;
}

int run_grid_study(const std::string& scene_path, int points, double diameter,
                   const std::string& out, bool serial) {
  const SceneConfig scene = load_scene(scene_path);
  const auto targets =
      make_fundus_targets(points, diameter, scene.eye, scene.fundus_depth);
  const auto start = std::chrono::steady_clock::now();
  const ManipulabilityReport report =
      serial ? grid_study_serial(scene, targets) : grid_study(scene, targets);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  emit_report(report, out);
  std::printf("%s", report_summary_text(report).c_str());
  std::printf("%.2f s, report %s\n", seconds, out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-arm eye surgery simulator with orbital manipulation"};
  app.require_subcommand(1);

  std::string scene_path;
  std::string trajectory;
  std::string mode = "orbital";
  std::optional<double> dt;
  double duration = 60.0;
  std::string out = "sim.csv";
  auto* simulate = app.add_subcommand("simulate", "Run a needle trajectory");
  simulate->add_option("--scene", scene_path, "Scene JSON")->required();
  simulate->add_option("--trajectory", trajectory,
                       "Waypoint CSV (t,x,y,z) or circle:D=<mm>[,period=<s>]")
      ->required();
  simulate->add_option("--mode", mode, "fixed or orbital");
  simulate->add_option("--dt", dt, "Control period override, s");
  simulate->add_option("--duration", duration, "Simulated seconds");
  simulate->add_option("--out", out, "CSV log path");

  int samples = 100;
  std::uint64_t seed = 1;
  auto* check = app.add_subcommand(
      "check-jacobians", "Compare analytic Jacobians with finite differences");
  check->add_option("--scene", scene_path, "Scene JSON")->required();
  check->add_option("--samples", samples, "Random configurations");
  check->add_option("--seed", seed, "RNG seed");

  int points = 149;
  double diameter = 14.0;
  bool serial = false;
  std::string report_path = "grid.csv";
  auto* grid = app.add_subcommand(
      "grid-study", "Manipulability with and without orbital manipulation");
  grid->add_option("--scene", scene_path, "Scene JSON")->required();
  grid->add_option("--points", points, "Number of fundus targets");
  grid->add_option("--diameter", diameter, "Target disc diameter, mm");
  grid->add_option("--out", report_path, "Report CSV path");
  grid->add_flag("--serial", serial, "Run without OpenMP");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      return run_simulate(scene_path, trajectory, mode, dt, duration, out);
    }
    if (*check) return run_check_jacobians(scene_path, samples, seed);
    if (*grid) {
      return run_grid_study(scene_path, points, diameter, report_path, serial);
    }
  } catch (const InfeasibleError& e) {
    std::fprintf(stderr, "error: infeasible QP: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
