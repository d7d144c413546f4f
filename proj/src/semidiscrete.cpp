#include "fracfem/semidiscrete.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracfem/kernel.hpp"
#include "fracfem/parallel.hpp"

namespace fracfem {
namespace {

long double quadratic_form(const SparseMatrix& a, const Vector& c) {
  long double total = 0.0L;
  for (int col = 0; col < a.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      total += static_cast<long double>(c[it.row()]) * it.value() * c[it.col()];
    }
  }
  return total;
}

double safe_sqrt(long double x) { return static_cast<double>(std::sqrt(std::max(x, 0.0L))); }

}  // namespace

Projection choose_projection(const SpatialDatum& v, double q) {
  return (q >= 2.0 && has_gradient(v)) ? Projection::Ritz : Projection::L2;
}

Vector project_initial(const FemSystem& system, const SpatialDatum& v, Projection projection) {
  if (projection == Projection::Ritz) return ritz_project(system, v);
  return l2_project(system, v);
}

SemidiscreteSolution::SemidiscreteSolution(FemSystem system, FracOrders orders,
                                           const SpatialDatum& initial, double regularity,
                                           std::vector<SourceTerm> sources,
                                           Projection projection)
    : system_(std::move(system)),
      orders_(std::move(orders)),
      sources_(std::move(sources)),
      projection_(projection == Projection::Auto ? choose_projection(initial, regularity)
                                                 : projection) {
  const auto& eig = system_.eigen();
  initial_ = project_initial(system_, initial, projection_);
  initial_modal_ = eig.vectors.transpose() * (system_.mass() * initial_);
  for (const auto& source : sources_) {
    // (P_h f, phi_j^h) = v_j^T M M^{-1} b = v_j^T b
    source_modal_.push_back(eig.vectors.transpose() * load_vector(system_.mesh(), source.space));
  }
}

Vector SemidiscreteSolution::evolve(double t) const {
  if (t < 0.0) throw std::invalid_argument("semidiscrete evolve: t must be >= 0");
  if (t == 0.0) return initial_;
  const auto& eig = system_.eigen();
  const Eigen::Index n = eig.values.size();
  Vector modal(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
    const double lambda = eig.values[static_cast<Eigen::Index>(j)];
    double value = initial_modal_[j] == 0.0 ? 0.0 : initial_modal_[j] *
                                                        relaxation_alt(lambda, t, orders_);
    for (std::size_t s = 0; s < sources_.size(); ++s) {
      if (source_modal_[s][j] == 0.0) continue;
      value += source_modal_[s][j] * duhamel_weight(lambda, sources_[s].time, orders_, t);
    }
    modal[static_cast<Eigen::Index>(j)] = value;
  });
  return eig.vectors * modal;
}

ErrorPair error_against_field(const Mesh& mesh, const FemSystem& system, const Vector& c,
                              const SpectralField& reference) {
  const auto pairing = mode_pairing(mesh, c, reference.modes);
  long double diff_l2 = 0.0L;
  long double diff_h1 = 0.0L;
  long double captured_l2 = 0.0L;
  long double captured_h1 = 0.0L;
  for (std::size_t m = 0; m < pairing.size(); ++m) {
    const long double lambda = reference.modes[m].lambda;
    const long double w = pairing[m];
    const long double d = w - reference.coeffs[m];
    diff_l2 += d * d;
    diff_h1 += lambda * d * d;
    captured_l2 += w * w;
    captured_h1 += lambda * w * w;
  }
  // Parts of u_h orthogonal to the retained modes count fully as error.
  const long double outside_l2 = quadratic_form(system.mass(), c) - captured_l2;
  const long double outside_h1 = quadratic_form(system.stiffness(), c) - captured_h1;
  return {safe_sqrt(diff_l2 + std::max(outside_l2, 0.0L)),
          safe_sqrt(diff_h1 + std::max(outside_h1, 0.0L))};
}

ErrorPair error_against_datum(const FemSystem& system, const Vector& c,
                              const SpatialDatum& exact) {
  const Vector b = load_vector(system.mesh(), exact);
  const Vector g = gradient_load(system.mesh(), exact);
  const long double norm_l2 = l2_norm(exact);
  const long double norm_h1 = h1_seminorm(exact);
  long double cb = 0.0L;
  long double cg = 0.0L;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    cb += static_cast<long double>(c[i]) * b[i];
    cg += static_cast<long double>(c[i]) * g[i];
  }
  return {safe_sqrt(quadratic_form(system.mass(), c) - 2.0L * cb + norm_l2 * norm_l2),
          safe_sqrt(quadratic_form(system.stiffness(), c) - 2.0L * cg + norm_h1 * norm_h1)};
}

}  // namespace fracfem
