// Serial vs OpenMP timings for the three parallel kernels: the theta-grid
// coverage curve, density sampling and Monte Carlo coverage.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "thresholdci/coverage.hpp"
#include "thresholdci/finite_distribution.hpp"
#include "thresholdci/monte_carlo.hpp"

using namespace thresholdci;

namespace {

double seconds(const std::function<void()>& body) {
  const auto start = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(const char* name, const std::function<void(Execution)>& body) {
  const double serial = seconds([&] { body(Execution::serial); });
  const double parallel = seconds([&] { body(Execution::parallel); });
  std::printf("%-22s serial %8.3f s  parallel %8.3f s  speedup %5.2f\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  const ProblemSetup setup = ProblemSetup::reference().with_eta(0.5);
  const IntervalSpec spec = IntervalSpec::estimated(0.823);

  std::vector<double> thetas(301);
  for (std::size_t j = 0; j < thetas.size(); ++j) thetas[j] = 3.0 * static_cast<double>(j) / 300.0;
  report("coverage curve (301)", [&](Execution e) { coverage_curve(EstimatorKind::hard, spec, setup, thetas, e); });

  const MixedDistribution dist(EstimatorKind::adaptive_soft, ProblemSetup::reference(), 0.16,
                               ScalingFactor::conservative(ProblemSetup::reference()));
  report("density grid (801)", [&](Execution e) { sample_density(dist, -4.0, 4.0, 801, e); });

  const SimulationPlan plan = SimulationPlan::synthetic(setup, 0.5, 2'000'000, 7);
  report("monte carlo (2e6)", [&](Execution e) { simulate_coverage(plan, EstimatorKind::hard, spec, e); });

  SearchConfig serial_cfg;
  serial_cfg.execution = Execution::serial;
  SearchConfig parallel_cfg;
  report("min coverage search", [&](Execution e) {
    min_coverage_search(EstimatorKind::adaptive_soft, spec, setup, e == Execution::serial ? serial_cfg : parallel_cfg);
  });
  return 0;
}
