#include "fracfem/orders.hpp"

#include <cmath>
#include <sstream>

namespace fracfem {

FracOrders::FracOrders(double alpha, std::vector<LowerOrder> lower,
                       double horizon)
    : alpha_(alpha), lower_(std::move(lower)), horizon_(horizon) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0,1)");
  }
  if (!(horizon > 0.0)) {
    throw std::invalid_argument("horizon T must be positive");
  }
  double previous = alpha;
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    const auto& term = lower_[i];
    if (!(term.order > 0.0)) {
      throw std::invalid_argument("lower orders must be positive");
    }
    if (i == 0 ? !(term.order < alpha) : !(term.order <= previous)) {
      throw std::invalid_argument(
          "lower orders must satisfy 0 < alpha_m <= ... <= alpha_1 < alpha");
    }
    if (!(term.weight > 0.0)) {
      throw std::invalid_argument("lower-order weights must be positive");
    }
    previous = term.order;
  }
}

FracOrders FracOrders::two_term(double alpha, double beta, double weight,
                                double horizon) {
  return FracOrders(alpha, {{beta, weight}}, horizon);
}

double FracOrders::min_order() const {
  return lower_.empty() ? alpha_ : lower_.back().order;
}

std::vector<double> FracOrders::ml_betas() const {
  std::vector<double> betas{alpha_};
  for (const auto& term : lower_) betas.push_back(alpha_ - term.order);
  return betas;
}

std::vector<double> FracOrders::ml_arguments(double lambda, double t) const {
  std::vector<double> zs{-lambda * std::pow(t, alpha_)};
  for (const auto& term : lower_) {
    zs.push_back(-term.weight * std::pow(t, alpha_ - term.order));
  }
  return zs;
}

FracOrders FracOrders::with_horizon(double horizon) const {
  return FracOrders(alpha_, lower_, horizon);
}

std::string FracOrders::describe() const {
  std::ostringstream os;
  os << "alpha=" << alpha_;
  for (const auto& term : lower_) {
    os << " +" << term.weight << "*d^" << term.order;
  }
  os << " T=" << horizon_;
  return os.str();
}

}  // namespace fracfem
