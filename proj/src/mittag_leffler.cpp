#include "fracfem/mittag_leffler.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>

#ifdef FRACFEM_HAVE_QUADMATH
#include <quadmath.h>
#endif

namespace fracfem {
namespace {

#ifdef FRACFEM_HAVE_QUADMATH
using wide = __float128;
constexpr double kWideEps = 1.93e-34;
inline wide wlog(wide x) { return logq(x); }
inline wide wexp(wide x) { return expq(x); }
inline wide wlgamma(wide x) { return lgammaq(x); }
inline wide wabs(wide x) { return fabsq(x); }
#else
using wide = long double;
constexpr double kWideEps = 1.08e-19;
inline wide wlog(wide x) { return std::log(x); }
inline wide wexp(wide x) { return std::exp(x); }
inline wide wlgamma(wide x) { return std::lgamma(x); }
inline wide wabs(wide x) { return std::fabs(x); }
#endif

// Neumaier-compensated accumulator.
struct CompensatedSum {
  wide sum = 0;
  wide carry = 0;
  void add(wide x) {
    const wide t = sum + x;
    if (wabs(sum) >= wabs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  wide value() const { return sum + carry; }
};

struct ActiveArgs {
  std::vector<double> betas;
  std::vector<wide> log_abs_z;
  std::vector<bool> negative;
};

ActiveArgs collect_active(const MLParams& params, std::span<const double> zs) {
  ActiveArgs a;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (zs[i] == 0.0) continue;
    a.betas.push_back(params.betas[i]);
    a.log_abs_z.push_back(wlog(static_cast<wide>(std::fabs(zs[i]))));
    a.negative.push_back(zs[i] < 0.0);
  }
  return a;
}

// Calls visit(l) for every composition l of k into parts.size() nonnegative
// parts, in lexicographically decreasing order of l[0].
void for_each_composition(int k, std::vector<int>& parts,
                          const std::function<void(const std::vector<int>&)>& visit) {
  const std::size_t m = parts.size();
  if (m == 1) {
    parts[0] = k;
    visit(parts);
    return;
  }
  std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int remaining) {
    if (idx + 1 == m) {
      parts[idx] = remaining;
      visit(parts);
      return;
    }
    for (int l = remaining; l >= 0; --l) {
      parts[idx] = l;
      rec(idx + 1, remaining - l);
    }
  };
  rec(0, k);
}

std::string describe_failure(const char* what, const MLParams& params,
                             std::span<const double> zs) {
  std::ostringstream os;
  os << what << " (beta0=" << params.beta0 << ", z=[";
  for (std::size_t i = 0; i < zs.size(); ++i) os << (i ? "," : "") << zs[i];
  os << "])";
  return os.str();
}

}  // namespace

void MLParams::validate(std::size_t argument_count) const {
  if (betas.empty()) throw std::invalid_argument("MLParams: betas is empty");
  if (betas.size() != argument_count) {
    throw std::invalid_argument("MLParams: argument count differs from betas");
  }
  for (double b : betas) {
    if (!(b > 0.0 && b <= 1.0)) {
      throw std::invalid_argument("MLParams: each beta_i must lie in (0,1]");
    }
  }
  if (!(beta0 > 0.0 && beta0 < 3.0)) {
    throw std::invalid_argument("MLParams: beta0 must lie in (0,3)");
  }
}

double reciprocal_gamma(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("reciprocal_gamma: x must be > 0");
  if (x < 170.0) return 1.0 / std::tgamma(x);
  return std::exp(-std::lgamma(x));
}

double multinomial_coeff(int k, std::span<const int> ls) {
  if (k < 0) throw std::invalid_argument("multinomial_coeff: k must be >= 0");
  long total = 0;
  for (int l : ls) {
    if (l < 0) throw std::invalid_argument("multinomial_coeff: negative index");
    total += l;
  }
  if (total != k) {
    throw std::invalid_argument("multinomial_coeff: indices must sum to k");
  }
  double log_value = std::lgamma(k + 1.0);
  for (int l : ls) log_value -= std::lgamma(l + 1.0);
  // Below 2^52 the coefficient is an exactly representable integer.
  return log_value < 36.0 ? std::round(std::exp(log_value)) : std::exp(log_value);
}

double mml_series_log_peak(const MLParams& params, std::span<const double> zs) {
  // Stirling: the largest term of sum_k |z|^k / Gamma(b0 + b k) is about
  // exp(|z|^{1/b}). Far beyond any usable range, skip the scan below.
  double growth = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    growth += std::pow(std::fabs(zs[i]), 1.0 / params.betas[i]);
  }
  if (growth > 200.0) return growth;
  double peak = -std::lgamma(params.beta0);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (zs[i] == 0.0) continue;
    const double lz = std::log(std::fabs(zs[i]));
    const double b = params.betas[i];
    // k log|z| - lgamma(b0 + b k) is concave in k; walk until it decreases.
    double best = -std::lgamma(params.beta0);
    for (int k = 1; k < 100000; ++k) {
      const double v = k * lz - std::lgamma(params.beta0 + b * k);
      if (v > best) {
        best = v;
      } else if (k > 4) {
        break;
      }
    }
    peak = std::max(peak, best + std::log(static_cast<double>(zs.size())));
  }
  return peak;
}

bool try_mml_eval(const MLParams& params, std::span<const double> zs,
                  double tol, MLEvalResult& out, const SeriesOptions& options) {
  params.validate(zs.size());
  if (!(tol > 0.0)) throw std::invalid_argument("mml_eval: tol must be > 0");
  for (double z : zs) {
    if (!std::isfinite(z)) throw std::invalid_argument("mml_eval: non-finite z");
  }

  const ActiveArgs args = collect_active(params, zs);
  out = MLEvalResult{};
  out.method = MLMethod::Series;
  if (args.betas.empty()) {
    out.value = reciprocal_gamma(params.beta0);
    out.terms_used = 1;
    return true;
  }

  const std::size_t m = args.betas.size();
  std::vector<wide> log_factorial{0};
  auto lfact = [&](int n) {
    while (static_cast<int>(log_factorial.size()) <= n) {
      log_factorial.push_back(log_factorial.back() +
                              wlog(static_cast<wide>(log_factorial.size())));
    }
    return log_factorial[n];
  };

  CompensatedSum total;
  double abs_total = 0.0;
  double max_abs_log = 0.0;
  double previous_layer_abs = -1.0;
  int terms = 0;
  std::vector<int> parts(m, 0);

  long layer_size = 1;  // C(k + m - 1, m - 1)
  for (int k = 0; k <= options.max_layers; ++k) {
    if (k > 0) layer_size = layer_size * (k + static_cast<long>(m) - 1) / k;
    if (terms + layer_size > options.max_terms) break;
    CompensatedSum layer;
    double layer_abs = 0.0;
    const wide lk = lfact(k);
    for_each_composition(k, parts, [&](const std::vector<int>& l) {
      wide log_term = lk;
      wide gamma_arg = params.beta0;
      bool negative = false;
      for (std::size_t i = 0; i < m; ++i) {
        if (l[i] == 0) continue;
        log_term += l[i] * args.log_abs_z[i] - lfact(l[i]);
        gamma_arg += static_cast<wide>(args.betas[i]) * l[i];
        if (args.negative[i] && (l[i] & 1)) negative = !negative;
      }
      log_term -= wlgamma(gamma_arg);
      const wide magnitude = wexp(log_term);
      layer.add(negative ? -magnitude : magnitude);
      layer_abs += static_cast<double>(magnitude);
      max_abs_log = std::max(max_abs_log, std::fabs(static_cast<double>(log_term)));
      ++terms;
    });
    total.add(layer.value());
    abs_total += layer_abs;

    if (k >= 2 && previous_layer_abs > 0.0) {
      const double ratio = layer_abs / previous_layer_abs;
      if (ratio < 0.9) {
        const double tail = layer_abs * ratio / (1.0 - ratio);
        // Relative to the sum once it drops below one, so tiny values such
        // as exp(-20) keep their leading digits.
        const double scale =
            std::max(std::min(1.0, std::fabs(static_cast<double>(total.value()))), 1e-30);
        if (tail < 1e-2 * tol * scale || layer_abs == 0.0) {
          const double rounding = abs_total * kWideEps * (16.0 + max_abs_log);
          out.value = static_cast<double>(total.value());
          out.terms_used = terms;
          out.tail_bound = tail;
          return rounding <= options.rounding_budget * tol;
        }
      }
    }
    if (layer_abs == 0.0 && k > 0) {
      out.value = static_cast<double>(total.value());
      out.terms_used = terms;
      return true;
    }
    previous_layer_abs = layer_abs;
  }
  out.value = static_cast<double>(total.value());
  out.terms_used = terms;
  out.tail_bound = previous_layer_abs;
  return false;
}

MLEvalResult mml_eval(const MLParams& params, std::span<const double> zs,
                      double tol, const SeriesOptions& options) {
  MLEvalResult result;
  if (!try_mml_eval(params, zs, tol, result, options)) {
    throw NumericalError(describe_failure(
        "mml_eval: series did not reach the tolerance; use the contour route",
        params, zs));
  }
  return result;
}

namespace {

double contour_sum(const MLParams& params, std::span<const double> zs, int nodes) {
  using cplx = std::complex<double>;
  const double n = nodes;
  double acc = 0.0;
  for (int k = nodes / 2; k < nodes; ++k) {
    const double theta = -std::numbers::pi + (k + 0.5) * 2.0 * std::numbers::pi / n;
    const cplx s = n * cplx(0.1309 - 0.1194 * theta * theta, 0.25 * theta);
    const cplx ds = n * cplx(-0.2388 * theta, 0.25);
    const cplx log_s = std::log(s);
    cplx denom = 1.0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
      if (zs[i] == 0.0) continue;
      denom += -zs[i] * std::exp(-params.betas[i] * log_s);
    }
    const cplx integrand = std::exp(s - params.beta0 * log_s) / denom * ds;
    acc += integrand.imag();
  }
  return 2.0 * acc / n;
}

}  // namespace

MLEvalResult mml_contour(const MLParams& params, std::span<const double> zs,
                         int nodes) {
  params.validate(zs.size());
  if (nodes < 8 || nodes % 2) {
    throw std::invalid_argument("mml_contour: nodes must be even and >= 8");
  }
  for (double z : zs) {
    if (!(z <= 0.0) || !std::isfinite(z)) {
      throw std::invalid_argument("mml_contour: arguments must be finite and <= 0");
    }
  }
  MLEvalResult result;
  result.method = MLMethod::Contour;
  result.value = contour_sum(params, zs, nodes);
  result.terms_used = nodes;
  result.tail_bound = std::fabs(result.value - contour_sum(params, zs, nodes - 8));
  return result;
}

MLEvalResult mml_value(const MLParams& params, std::span<const double> zs,
                       double tol) {
  params.validate(zs.size());
  // Past a peak of ~e^20 the series costs hundreds of layers while the
  // contour is already at full accuracy.
  const double budget = std::min(20.0, std::log(0.1 * tol / kWideEps) - 4.0);
  if (mml_series_log_peak(params, zs) < budget) {
    // The contour is the fallback, so do not spend long on a slow series.
    SeriesOptions quick;
    quick.max_terms = 20'000;
    MLEvalResult result;
    if (try_mml_eval(params, zs, tol, result, quick)) return result;
  }
  return mml_contour(params, zs);
}

double mml_recurrence_residual(const MLParams& params, std::span<const double> zs,
                               double tol) {
  params.validate(zs.size());
  double lhs = reciprocal_gamma(params.beta0);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (zs[i] == 0.0) continue;
    MLParams shifted = params;
    shifted.beta0 = params.beta0 + params.betas[i];
    lhs += zs[i] * mml_value(shifted, zs, tol).value;
  }
  return std::fabs(lhs - mml_value(params, zs, tol).value);
}

}  // namespace fracfem
