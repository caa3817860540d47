#pragma once

#include <string>
#include <vector>

namespace calabi {

// One sweep cell. On failure `ok` is false and the numeric fields are NaN.
struct SweepRow {
  double m = 0.0;
  double beta0 = 0.0;
  double beta_inf = 0.0;
  double alpha_star = 0.0;
  double C_m = 0.0;
  double residual_bvp = 0.0;
  double logbf_conical = 0.0;
  double line_residual = 0.0;
  double chern_integral = 0.0;
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  bool ok = false;
  std::string error;
};

// Cells run concurrently; rows come back sorted by (m, beta0) so the output
// is deterministic. Failures are recorded in-row and the sweep continues.
std::vector<SweepRow> run_sweep(std::vector<double> ms, std::vector<double> beta0s,
                                double tol);

// Fixed-column RFC-4180 CSV with 17-significant-digit numbers and \n endings.
std::string sweep_csv(const std::vector<SweepRow>& rows);

} // namespace calabi
