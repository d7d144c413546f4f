#pragma once

// Convergence studies over h, tau and t ladders, rate fits, and the CSV
// table format shared by the CLI and the tests.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fracfem/cases.hpp"
#include "fracfem/orders.hpp"

namespace fracfem {

struct RateFit {
  double rate = 0.0;
  /// Largest |residual| of the least-squares line in natural-log units.
  double max_residual = 0.0;
  /// log2(e_i / e_{i+1}) / log2(p_i / p_{i+1}) for consecutive points.
  std::vector<double> pairwise;
  bool flagged = false;
};

/// Least-squares slope of log error against log param over all points.
/// Requires >= 3 points with params strictly monotone and close to a
/// geometric progression (consecutive log ratios within 10% of their mean);
/// throws std::invalid_argument otherwise. Nonpositive errors give a NaN
/// rate and a flagged fit. Fits with max_residual > 0.05 are flagged.
RateFit fit_rate(std::span<const double> params, std::span<const double> errors);

/// fit_rate(...).rate
double estimate_rate(std::span<const double> params, std::span<const double> errors);

struct LadderPoint {
  double param = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;
};

struct ConvergenceReport {
  std::string case_name;
  std::string study;  // "space", "time" or "blowup"
  double t_eval = 0.0;
  std::vector<LadderPoint> points;
  double rate_l2 = 0.0;
  double rate_h1 = 0.0;
  double theory_l2 = 0.0;
  double theory_h1 = 0.0;
  double tolerance = 0.15;
  double residual_l2 = 0.0;
  double residual_h1 = 0.0;
  bool flagged = false;
  std::vector<std::string> notes;

  bool pass_l2() const;
  bool pass_h1() const;
  /// Fills rates and residuals from the points; flags poor fits. Set the
  /// theory fields first: a NaN theory exempts that norm from flagging.
  void fit();
};

bool operator==(const ConvergenceReport& a, const ConvergenceReport& b);

struct SpaceStudyOptions {
  /// Spectral reference modes: n on the interval, n x n on the square.
  /// Zero picks 65536 and 256 respectively.
  int reference_modes = 0;
  double tolerance = 0.15;
};

/// Semidiscrete (exact in time) errors at each t against the spectral
/// reference or the manufactured solution. Errors are normalized by
/// DataCase::normalization(). Params are h = 1 / n. One report per t.
std::vector<ConvergenceReport> run_convergence_space(const DataCase& data,
                                                     const FracOrders& orders,
                                                     const std::vector<double>& times,
                                                     const std::vector<int>& resolutions,
                                                     const SpaceStudyOptions& options = {});

struct TimeStudyOptions {
  double tolerance = 0.10;
  /// Recompute the finest rung on a mesh of 2n cells and flag the report
  /// if the spatial error exceeds 10% of the smallest temporal error.
  bool check_spatial = true;
};

/// Fully discrete errors at t = orders.horizon() for K in `steps`, against
/// the manufactured solution, or against the semidiscrete solution on the
/// same mesh for spectral cases. Params are tau.
ConvergenceReport run_convergence_time(const DataCase& data, const FracOrders& orders,
                                       int resolution, const std::vector<int>& steps,
                                       const TimeStudyOptions& options = {});

/// Fixed mesh, decreasing t; the L2 fit is the growth exponent and is
/// compared with DataCase::blowup_exponent.
ConvergenceReport run_blowup_study(const DataCase& data, const FracOrders& orders,
                                   int resolution, const std::vector<double>& times,
                                   const SpaceStudyOptions& options = {}, double tolerance = 0.08);

/// Deterministic CSV: header "param,l2_error,h1_error", one row per point,
/// then "# key=value" footers starting with rate_l2, rate_h1 and theory.
/// Numbers use the shortest round-trip representation.
std::string emit_table(const ConvergenceReport& report);

/// Inverse of emit_table. Throws std::invalid_argument on malformed input.
ConvergenceReport parse_table(std::string_view text);

}  // namespace fracfem
