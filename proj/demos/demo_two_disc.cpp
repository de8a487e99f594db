// Sweeps the gap between two unit discs and compares the computed far-field
// charge coefficient of the capacitance/elastance round trip against the
// closed-form two-disc solution (bipolar images).

#include <cstdio>

#include "bie2d/bie2d.hpp"

int main() {
  using namespace bie2d;
  std::printf("%-8s  %-14s  %-14s  %-9s  %-9s  %s\n", "gap", "q1_log", "exact", "rel_err",
              "rt_err", "iters");
  for (double d : {1.0, 0.5, 0.1, 0.05, 0.01, 0.005}) {
    const ElastanceRoundTrip rt = scen::run_two_disc_elastance(d);
    const TwoDiscExact exact(d, scen::two_disc_phi()[0], scen::two_disc_phi()[1]);
    const double q = rt.q_log[0];
    const double qe = exact.exact_q1();
    const double rel = std::abs(q - qe) / std::abs(qe);
    const double rt_err = std::max(rt.errors[0], rt.errors[1]);
    std::printf("%-8g  %-14.9f  %-14.9f  %-9.2e  %-9.2e  %d+%d\n", d, q, qe, rel, rt_err,
                rt.capacitance.stats.iterations, rt.elastance.stats.iterations);
  }
  return 0;
}
