// Walkthrough: build the Frobenius-pushforward sequence U_e for a cubic
// threefold, print the slice profile and the convergence row, and check the
// exact multiplicity formula by hand.

#include <cstdio>

#include "limulrich/emit.hpp"
#include "limulrich/parse.hpp"

using namespace limulrich;

int main() {
  Polynomial cubic = parse_polynomial("x0^3 + x1^3 + x2^3 + x3^3", 4, 5);
  auto ring = std::make_shared<GradedAlgebra>(5, 4, std::vector<Polynomial>{cubic}, 16);

  PipelineOptions opts;  // J = 4 slices knob, class -1 mod q
  RingData rd = prepare_ring(ring, 3, /*seed=*/7, opts);
  printf("ring: dim 3 cubic over GF(5), s = e(m,R) = %lld, free over A: %s, shifts:", rd.s,
         rd.free_over_A ? "yes" : "no");
  for (int b : rd.shifts) printf(" %d", b);
  printf("\n\n");

  for (int e = 1; e <= 2; ++e) {
    ConvergenceRow row = convergence_row(rd, e, opts);
    printf("e=%d (q=%lld): slice dims", e, row.q);
    for (int j = 0; j <= opts.J + 1; ++j) {
      long long dim = 0;
      for (int b : rd.shifts) dim += w_dim(2, row.q, row.q - 1 + j * row.q - b);
      printf(" %lld", dim);
    }
    printf("\n  nu=%lld  e(z,U)=%lld (predicted %lld)  chi1=%lld\n", row.nu, row.mult,
           row.predicted_mult, row.chi1);
    printf("  e(z,U)/nu = %s   chi1/nu = %s\n\n", frac_cell(row.ratio_mult_nu).c_str(),
           frac_cell(row.ratio_chi1_nu).c_str());
  }
  return 0;
}
