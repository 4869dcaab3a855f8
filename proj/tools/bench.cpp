// Timing comparison of the OpenMP oracle kernels against the serial
// reference paths, on identical seeded workloads.
#include "negctrl/oracle.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>

namespace {

double seconds_of(const std::function<void()>& body) {
  const auto start = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  int states = 8;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--states") == 0 && i + 1 < argc) states = std::atoi(argv[i + 1]);

  std::mt19937_64 rng(7);
  const negctrl::CovarianceMatrix sigma = negctrl::random_entangled_state(rng);
  const negctrl::BathParams baths = negctrl::random_baths(rng);

  std::printf("%-28s %10s %10s %8s %s\n", "kernel", "serial[s]", "openmp[s]", "speedup", "match");

  {
    negctrl::SearchSettings serial;
    serial.parallel = false;
    negctrl::SearchSettings parallel;
    parallel.parallel = true;
    negctrl::OracleReport r_serial, r_parallel;
    const double t_serial = seconds_of([&] { r_serial = brute_force_control(sigma, baths, serial); });
    const double t_parallel =
        seconds_of([&] { r_parallel = brute_force_control(sigma, baths, parallel); });
    const bool match = r_serial.numeric_mode1.z == r_parallel.numeric_mode1.z &&
                       r_serial.numeric_mode2.z == r_parallel.numeric_mode2.z &&
                       r_serial.numeric_objective == r_parallel.numeric_objective;
    std::printf("%-28s %10.3f %10.3f %8.2f %s\n", "grid-search (1 state)", t_serial, t_parallel,
                t_serial / t_parallel, match ? "yes" : "NO");
  }

  {
    negctrl::SuiteSettings serial;
    serial.states = states;
    serial.parallel = false;
    negctrl::SuiteSettings parallel = serial;
    parallel.parallel = true;
    negctrl::SuiteReport r_serial, r_parallel;
    const double t_serial = seconds_of([&] { r_serial = run_verification_suite(serial); });
    const double t_parallel = seconds_of([&] { r_parallel = run_verification_suite(parallel); });
    const bool match = r_serial.max_z_gap == r_parallel.max_z_gap &&
                       r_serial.max_objective_gap == r_parallel.max_objective_gap &&
                       r_serial.max_derivative_residual == r_parallel.max_derivative_residual;
    char label[64];
    std::snprintf(label, sizeof(label), "verification suite (%d)", states);
    std::printf("%-28s %10.3f %10.3f %8.2f %s\n", label, t_serial, t_parallel,
                t_serial / t_parallel, match ? "yes" : "NO");
  }
  return 0;
}
