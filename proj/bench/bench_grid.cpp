// Times the manipulability grid study with and without OpenMP and checks
// that both produce the same report.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include <omp.h>

#include "eyeorbit/analysis.hpp"
#include "eyeorbit/scene.hpp"

using namespace eyeorbit;

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: bench_grid SCENE [POINTS]\n");
    return 2;
  }
  const SceneConfig scene = load_scene(argv[1]);
  const int points = argc > 2 ? std::atoi(argv[2]) : 149;
  const auto targets = make_fundus_targets(points, 14.0, scene.eye, scene.fundus_depth);

  auto timed = [&](auto&& run) {
    const auto t0 = std::chrono::steady_clock::now();
    ManipulabilityReport r = run();
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::pair{std::move(r), s};
  };
  const auto [serial, ts] = timed([&] { return grid_study_serial(scene, targets); });
  const auto [parallel, tp] = timed([&] { return grid_study(scene, targets); });

  std::ostringstream a, b;
  write_report_csv(serial, a);
  write_report_csv(parallel, b);
  const bool same = a.str() == b.str();
  std::printf("points %d, threads %d\n", points, omp_get_max_threads());
  std::printf("serial   %.3f s\n", ts);
  std::printf("parallel %.3f s\n", tp);
  std::printf("speedup  %.2fx, reports %s\n", ts / tp, same ? "identical" : "DIFFER");
  return same ? 0 : 1;
}
