#pragma once

// Multinomial Mittag-Leffler function
//
//   E_{(b_1..b_m), b0}(z_1..z_m)
//     = sum_k sum_{l_1+..+l_m=k} (k; l_1..l_m) prod z_i^{l_i} / Gamma(b0 + sum b_i l_i)
//
// evaluated on the nonpositive real axis. Three independent routes exist:
// the power series (mml_eval), a Bromwich inversion along a parabolic contour
// (mml_contour), and, for the solution kernels only, the real-axis integrals
// in kernel.hpp.

#include <span>
#include <vector>

#include "fracfem/orders.hpp"

namespace fracfem {

struct MLParams {
  std::vector<double> betas;
  double beta0 = 1.0;

  void validate(std::size_t argument_count) const;
};

enum class MLMethod { Series, Contour };

struct MLEvalResult {
  double value = 0.0;
  int terms_used = 0;
  double tail_bound = 0.0;
  MLMethod method = MLMethod::Series;
};

/// k! / (l_1! ... l_m!), evaluated through log-gamma so k may reach several
/// hundred without overflow. Throws std::invalid_argument if sum(ls) != k.
double multinomial_coeff(int k, std::span<const int> ls);

struct SeriesOptions {
  int max_layers = 600;
  /// Give up once this many multinomial terms have been summed; with
  /// several small b_i the layers grow like k^{m-1} and converge slowly.
  long max_terms = 300'000;
  /// Reject the series when the estimated rounding error of the alternating
  /// sum exceeds this fraction of tol.
  double rounding_budget = 0.1;
};

/// Truncated power series summed layer by layer in total degree k. Each layer
/// is accumulated with Neumaier compensation in extended precision; the sum
/// stops once a geometric majorant of the remaining layers drops below
/// tol * min(1, |partial sum|).
/// Throws NumericalError if that does not happen within max_layers or if
/// cancellation makes the result unreliable.
MLEvalResult mml_eval(const MLParams& params, std::span<const double> zs,
                      double tol, const SeriesOptions& options = {});

/// Non-throwing variant of mml_eval; false means the series is unusable.
bool try_mml_eval(const MLParams& params, std::span<const double> zs,
                  double tol, MLEvalResult& out,
                  const SeriesOptions& options = {});

/// Cheap a-priori estimate of log(max series term); used to skip the series
/// for arguments where its cancellation is hopeless.
double mml_series_log_peak(const MLParams& params, std::span<const double> zs);

/// Bromwich inversion of s^{-b0} / (1 + sum_i c_i s^{-b_i}) at t = 1 with
/// c_i = -z_i, using the midpoint rule on a parabolic Hankel-type contour.
/// Valid for any b0 > 0 and all z_i <= 0.
MLEvalResult mml_contour(const MLParams& params, std::span<const double> zs,
                         int nodes = 32);

/// Series when it is reliable, otherwise the contour integral.
MLEvalResult mml_value(const MLParams& params, std::span<const double> zs,
                       double tol = 1e-12);

/// |1/Gamma(b0) + sum_i z_i E_{(b), b0+b_i}(z) - E_{(b), b0}(z)|, each value
/// from mml_value. Exact zero for z = 0.
double mml_recurrence_residual(const MLParams& params,
                               std::span<const double> zs, double tol = 1e-12);

/// 1 / Gamma(x) for x > 0 without overflow for large x.
double reciprocal_gamma(double x);

}  // namespace fracfem
