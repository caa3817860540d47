#include "calabi/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <sstream>

#include "calabi/futaki.hpp"
#include "calabi/invariants.hpp"
#include "calabi/log.hpp"
#include "calabi/report.hpp"

namespace calabi {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SweepRow make_failed_row(double m, double beta0, const std::string& error) {
  SweepRow row;
  row.m = m;
  row.beta0 = beta0;
  row.beta_inf = row.alpha_star = row.C_m = row.residual_bvp = kNaN;
  row.logbf_conical = row.line_residual = row.chern_integral = kNaN;
  row.lambda0 = row.lambda1 = kNaN;
  row.ok = false;
  row.error = error;
  return row;
}

SweepRow solve_cell(double m, double beta0, double tol, double C_m,
                    const std::string& smooth_error) {
  try {
    const SolveReport rep = solve_conical(m, beta0, tol);
    const MomentumProfile prof = profile_from_trajectory(rep.trajectory, rep.coeffs);
    const InvariantReport inv =
        invariant_report(prof, m, rep.spec.beta0, rep.spec.beta_inf);
    const FutakiEvaluation fut =
        logbf_conical(m, rep.spec.beta0, rep.spec.beta_inf, prof);

    SweepRow row;
    row.m = m;
    row.beta0 = beta0;
    row.beta_inf = rep.spec.beta_inf;
    row.alpha_star = rep.spec.alpha;
    row.residual_bvp = rep.residual;
    row.logbf_conical = fut.value;
    row.chern_integral = inv.chern.computed;
    row.lambda0 = inv.lambda0.computed;
    row.lambda1 = inv.lambda1.computed;
    row.ok = true;
    if (std::isfinite(C_m)) {
      row.C_m = C_m;
      row.line_residual =
          cone_angle_line(m, C_m).residual(beta0, rep.spec.beta_inf);
    } else {
      row.C_m = kNaN;
      row.line_residual = kNaN;
      row.ok = false;
      row.error = smooth_error;
    }
    return row;
  } catch (const std::exception& e) {
    return make_failed_row(m, beta0, e.what());
  }
}

} // namespace

std::vector<SweepRow> run_sweep(std::vector<double> ms, std::vector<double> beta0s,
                                double tol) {
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  std::sort(beta0s.begin(), beta0s.end());
  beta0s.erase(std::unique(beta0s.begin(), beta0s.end()), beta0s.end());

  // one smooth solve per class parameter, shared across the beta0 column
  std::map<double, std::future<std::pair<double, std::string>>> smooth_futures;
  for (double m : ms)
    smooth_futures.emplace(m, std::async(std::launch::async, [m, tol] {
      try {
        return std::make_pair(solve_smooth(m, tol).C_star, std::string());
      } catch (const std::exception& e) {
        return std::make_pair(kNaN, std::string(e.what()));
      }
    }));
  std::map<double, std::pair<double, std::string>> smooth_results;
  for (auto& [m, fut] : smooth_futures) smooth_results[m] = fut.get();

  std::vector<std::future<SweepRow>> cells;
  cells.reserve(ms.size() * beta0s.size());
  for (double m : ms)
    for (double beta0 : beta0s) {
      const auto& [C_m, err] = smooth_results[m];
      cells.push_back(std::async(std::launch::async, solve_cell, m, beta0, tol, C_m,
                                 err));
    }

  std::vector<SweepRow> rows;
  rows.reserve(cells.size());
  for (auto& cell : cells) rows.push_back(cell.get());
  // cells were launched in (m, beta0) order, so rows are already sorted
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "m,beta0,beta_inf,alpha_star,C_m,residual_bvp,logbf_conical,line_residual,"
         "chern_integral,lambda0,lambda1\n";
  for (const auto& r : rows) {
    const double cols[] = {r.m,          r.beta0,         r.beta_inf,
                           r.alpha_star, r.C_m,           r.residual_bvp,
                           r.logbf_conical, r.line_residual, r.chern_integral,
                           r.lambda0,    r.lambda1};
    for (std::size_t i = 0; i < sizeof(cols) / sizeof(cols[0]); ++i) {
      if (i > 0) out << ',';
      out << format_number(cols[i]);
    }
    out << '\n';
  }
  return out.str();
}

} // namespace calabi
