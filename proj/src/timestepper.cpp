#include "fracfem/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SparseCholesky>

namespace fracfem {

TimeGrid::TimeGrid(double horizon_, int steps_) : horizon(horizon_), steps(steps_) {
  if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
  if (steps < 1) throw std::invalid_argument("TimeGrid: need at least one step");
}

std::vector<double> l1_weights(double alpha, int count) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("l1_weights: alpha not in (0,1)");
  if (count < 0) throw std::invalid_argument("l1_weights: negative count");
  std::vector<double> d(static_cast<std::size_t>(count));
  const double p = 1.0 - alpha;
  for (int j = 0; j < count; ++j) {
    if (j == 0) {
      d[0] = 1.0;
    } else {
      // j^p ((1 + 1/j)^p - 1) without the cancellation of the plain difference
      d[j] = std::pow(double(j), p) * std::expm1(p * std::log1p(1.0 / j));
    }
  }
  return d;
}

TimeWeights p_weights(const FracOrders& orders, double tau, int count) {
  if (!(tau > 0.0)) throw std::invalid_argument("p_weights: tau must be positive");
  const double alpha = orders.alpha();
  TimeWeights w;
  w.tau = tau;
  w.gamma = std::tgamma(2.0 - alpha) * std::pow(tau, alpha);
  w.p = l1_weights(alpha, count);
  for (const auto& lo : orders.lower()) {
    const double scale = std::tgamma(2.0 - alpha) * lo.weight * std::pow(tau, alpha - lo.order) /
                         std::tgamma(2.0 - lo.order);
    const auto d = l1_weights(lo.order, count);
    for (int j = 0; j < count; ++j) w.p[j] += scale * d[j];
  }
  for (int j = 0; j < count; ++j) {
    if (!(w.p[j] > 0.0) || (j > 0 && !(w.p[j] < w.p[j - 1]))) {
      throw NumericalError("p_weights: weights lost strict monotonicity at j = " +
                           std::to_string(j));
    }
  }
  return w;
}

double caputo_l1_apply(std::span<const double> samples, double alpha, double tau) {
  if (samples.size() < 2) throw std::invalid_argument("caputo_l1_apply: need at least two samples");
  if (!(tau > 0.0)) throw std::invalid_argument("caputo_l1_apply: tau must be positive");
  const int n = static_cast<int>(samples.size()) - 2;
  const auto d = l1_weights(alpha, n + 1);
  double total = 0.0;
  for (int j = 0; j <= n; ++j) total += d[j] * (samples[n + 1 - j] - samples[n - j]);
  return total / (std::tgamma(2.0 - alpha) * std::pow(tau, alpha));
}

struct FullyDiscreteStepper::Factor {
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
};

FullyDiscreteStepper::FullyDiscreteStepper(const FemSystem& system, const FracOrders& orders,
                                           const TimeGrid& grid, Vector initial)
    : system_(&system),
      grid_(grid),
      weights_(p_weights(orders, grid.tau(), grid.steps + 1)),
      factor_(std::make_unique<Factor>()) {
  if (initial.size() != system.dofs()) {
    throw std::invalid_argument("FullyDiscreteStepper: initial vector has wrong size");
  }
  const SparseMatrix a = weights_.p[0] * system.mass() + weights_.gamma * system.stiffness();
  factor_->ldlt.compute(a);
  if (factor_->ldlt.info() != Eigen::Success) {
    throw NumericalError("FullyDiscreteStepper: factorization of P0 M + gamma K failed");
  }
  history_.reserve(static_cast<std::size_t>(grid.steps) + 1);
  history_.push_back(std::move(initial));
}

FullyDiscreteStepper::~FullyDiscreteStepper() = default;
FullyDiscreteStepper::FullyDiscreteStepper(FullyDiscreteStepper&&) noexcept = default;
FullyDiscreteStepper& FullyDiscreteStepper::operator=(FullyDiscreteStepper&&) noexcept = default;

const Vector& FullyDiscreteStepper::step(const Vector& load) {
  const int n = current_step();
  if (n >= grid_.steps) throw std::logic_error("FullyDiscreteStepper: grid exhausted");
  const auto& p = weights_.p;
  Vector combo = p[n] * history_[0];
  for (int j = 0; j < n; ++j) combo += (p[j] - p[j + 1]) * history_[n - j];
  Vector rhs = system_->mass() * combo + weights_.gamma * load;
  Vector next = factor_->ldlt.solve(rhs);
  if (factor_->ldlt.info() != Eigen::Success) throw NumericalError("FullyDiscreteStepper: solve failed");
  history_.push_back(std::move(next));
  return history_.back();
}

Trajectory solve_fully_discrete(const FemSystem& system, const FracOrders& orders,
                                const TimeGrid& grid, const Vector& initial,
                                const std::vector<SourceTerm>& sources,
                                std::vector<int> checkpoints) {
  checkpoints.push_back(0);
  checkpoints.push_back(grid.steps);
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  if (checkpoints.front() < 0 || checkpoints.back() > grid.steps) {
    throw std::invalid_argument("solve_fully_discrete: checkpoint outside the grid");
  }
  std::vector<Vector> loads;
  for (const auto& s : sources) loads.push_back(load_vector(system.mesh(), s.space));

  FullyDiscreteStepper stepper(system, orders, grid, initial);
  Trajectory out;
  auto record = [&](int n) {
    out.steps.push_back(n);
    out.times.push_back(grid.node(n));
    out.states.push_back(stepper.history()[n]);
  };
  std::size_t next = 0;
  if (checkpoints[next] == 0) {
    record(0);
    ++next;
  }
  for (int n = 0; n < grid.steps; ++n) {
    const double t = grid.node(n + 1);
    Vector load = Vector::Zero(system.dofs());
    for (std::size_t s = 0; s < sources.size(); ++s) {
      const double g = sources[s].time(t);
      if (g != 0.0) load += g * loads[s];
    }
    stepper.step(load);
    if (next < checkpoints.size() && checkpoints[next] == n + 1) {
      record(n + 1);
      ++next;
    }
  }
  return out;
}

StabilityReport stability_probe(const FemSystem& system, const FracOrders& orders,
                                const TimeGrid& grid, const Vector& initial,
                                const std::function<Vector(int)>& source) {
  const double alpha = orders.alpha();
  StabilityReport report;
  report.constant = std::tgamma(2.0 - alpha) * std::pow(grid.horizon, alpha) / (1.0 - alpha);
  FullyDiscreteStepper stepper(system, orders, grid, initial);
  const double u0 = l2_norm(system, initial);
  report.max_norm = u0;
  double max_f = 0.0;
  for (int n = 1; n <= grid.steps; ++n) {
    const Vector f = source(n);
    max_f = std::max(max_f, l2_norm(system, f));
    const Vector& u = stepper.step(system.mass() * f);
    report.max_norm = std::max(report.max_norm, l2_norm(system, u));
  }
  report.bound = u0 + report.constant * max_f;
  report.holds = report.max_norm <= report.bound * (1.0 + 1e-12) + 1e-300;
  return report;
}

}  // namespace fracfem
