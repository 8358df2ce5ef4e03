// Measures the empirical constants that fixtures.hpp freezes: the
// monotonicity constant scan and the five inequality-statistic maxima on the
// default ensemble, at two resolutions so drift between N and 2N is visible.
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "anspde/analysis.hpp"
#include "anspde/inequalities.hpp"

using namespace anspde;

int main(int argc, char** argv) {
  int samples = 200;
  int resolution = 32;
  int workers = 2;
  double amplitude = 1.0;
  bool both = true;
  bool skip_scan = false;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--samples") && i + 1 < argc)
      samples = std::atoi(argv[++i]);
    else if (!std::strcmp(argv[i], "--resolution") && i + 1 < argc)
      resolution = std::atoi(argv[++i]);
    else if (!std::strcmp(argv[i], "--workers") && i + 1 < argc)
      workers = std::atoi(argv[++i]);
    else if (!std::strcmp(argv[i], "--amplitude") && i + 1 < argc)
      amplitude = std::atof(argv[++i]);
    else if (!std::strcmp(argv[i], "--single"))
      both = false;
    else if (!std::strcmp(argv[i], "--no-scan"))
      skip_scan = true;
  }

  if (!skip_scan) {
    std::printf("# monotonicity constant scan (reduced 1000x1000 grid + refinement)\n");
    for (double alpha : {1.25, 1.5, 2.0}) {
      const double ks = kappa_star_scan(alpha);
      std::printf("kappa_star(%.2f) = %.17g   (2^-2a = %.17g)\n", alpha, ks,
                  std::pow(2.0, -2.0 * alpha));
    }
  }

  for (int n : {resolution, 2 * resolution}) {
    IneqEnsembleSpec spec;
    spec.samples = samples;
    spec.resolution = n;
    spec.workers = workers;
    spec.amplitude = amplitude;
    const IneqSuiteReport rep = inequality_suite(spec);
    std::printf("\n# ensemble maxima, N=%d, samples=%d, seed=%llu\n", n, samples,
                (unsigned long long)spec.seed);
    std::printf("maj_B   = %.17g\n", rep.stats.maj_b);
    std::printf("gn      = %.17g\n", rep.stats.gn);
    std::printf("d3b     = %.17g\n", rep.stats.d3b);
    std::printf("fgh     = %.17g\n", rep.stats.fgh);
    std::printf("f_diff  = %.17g\n", rep.stats.f_diff);
    std::printf("degenerate = %d\n", rep.stats.degenerate);
    if (!both) break;
  }
  return 0;
}
