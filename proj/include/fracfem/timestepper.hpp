#pragma once

// Fully discrete scheme: L1 approximation of every Caputo term on a uniform
// grid, one factorization of P_0 M + gamma K reused for all steps.

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "fracfem/data.hpp"
#include "fracfem/fem.hpp"
#include "fracfem/orders.hpp"

namespace fracfem {

struct TimeGrid {
  double horizon = 1.0;
  int steps = 1;

  TimeGrid(double horizon, int steps);
  double tau() const { return horizon / steps; }
  double node(int n) const { return n == steps ? horizon : horizon * n / steps; }
};

/// d_j = (j+1)^{1-a} - j^{1-a}, j = 0..count-1.
std::vector<double> l1_weights(double alpha, int count);

struct TimeWeights {
  double tau = 0.0;
  double gamma = 0.0;      // Gamma(2 - alpha) tau^alpha
  std::vector<double> p;   // P_0 > P_1 > ... > 0
};

/// Throws NumericalError if the combined weights fail strict monotonicity.
TimeWeights p_weights(const FracOrders& orders, double tau, int count);

/// L1 approximation of the Caputo derivative at the last of the given
/// uniformly spaced samples u(t_0), ..., u(t_{n+1}).
double caputo_l1_apply(std::span<const double> samples, double alpha, double tau);

class FullyDiscreteStepper {
 public:
  FullyDiscreteStepper(const FemSystem& system, const FracOrders& orders, const TimeGrid& grid,
                       Vector initial);
  ~FullyDiscreteStepper();
  FullyDiscreteStepper(FullyDiscreteStepper&&) noexcept;
  FullyDiscreteStepper& operator=(FullyDiscreteStepper&&) noexcept;

  /// Advances one step; `load` is <f(t_{n+1}), hat_i>. Returns U^{n+1}.
  const Vector& step(const Vector& load);

  int current_step() const { return static_cast<int>(history_.size()) - 1; }
  const std::vector<Vector>& history() const { return history_; }
  const TimeWeights& weights() const { return weights_; }

 private:
  struct Factor;
  const FemSystem* system_;
  TimeGrid grid_;
  TimeWeights weights_;
  std::unique_ptr<Factor> factor_;
  std::vector<Vector> history_;
};

struct Trajectory {
  std::vector<int> steps;
  std::vector<double> times;
  std::vector<Vector> states;
};

/// Runs all K steps with loads sum_s g_s(t_{n+1}) <f_s, hat>. Records the
/// requested step indices (always including 0 and K), in increasing order.
Trajectory solve_fully_discrete(const FemSystem& system, const FracOrders& orders,
                                const TimeGrid& grid, const Vector& initial,
                                const std::vector<SourceTerm>& sources,
                                std::vector<int> checkpoints = {});

struct StabilityReport {
  double max_norm = 0.0;  // max_n ||U^n||
  double bound = 0.0;     // ||U^0|| + c max_j ||F^j||
  double constant = 0.0;  // c = Gamma(2-alpha) T^alpha / (1-alpha)
  bool holds = true;
};

/// Steps with F^n given as X_h coefficients, n = 1..K, and checks the
/// a priori bound. The bound is compared with a 1e-12 relative allowance.
StabilityReport stability_probe(const FemSystem& system, const FracOrders& orders,
                                const TimeGrid& grid, const Vector& initial,
                                const std::function<Vector(int)>& source);

}  // namespace fracfem
