#include "fracfem/fem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <variant>

#include <Eigen/SparseCholesky>
#include <boost/math/quadrature/gauss.hpp>
#include <lapacke.h>

#include "fracfem/orders.hpp"

namespace fracfem {

struct FemSystem::Cache {
  std::once_flag eigen_once;
  DiscreteEigen eigen;
  std::once_flag mass_once;
  Eigen::SimplicialLLT<SparseMatrix> mass_llt;
  std::once_flag stiffness_once;
  Eigen::SimplicialLLT<SparseMatrix> stiffness_llt;
};

namespace {

constexpr double kPi = std::numbers::pi;
using Point = std::array<double, 2>;

double sinc(double x) { return std::fabs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// Fourier transform of the hat centered at the origin, int hat(u) cos(p.u).
double hat_transform_1d(double p, double h) {
  const double s = sinc(0.5 * p * h);
  return h * s * s;
}

double hat_transform_2d(double p, double q, double h) {
  return h * h * sinc(0.5 * p * h) * sinc(0.5 * q * h) * sinc(0.5 * (p + q) * h);
}

// Antiderivative of the reference hat max(0, 1 - |u|).
double hat_antiderivative(double u) {
  if (u <= -1.0) return 0.0;
  if (u <= 0.0) return 0.5 * (u + 1.0) * (u + 1.0);
  if (u <= 1.0) return 1.0 - 0.5 * (1.0 - u) * (1.0 - u);
  return 1.0;
}

std::array<double, 3> barycentric(const std::array<Point, 3>& tri, const Point& p) {
  const double det = (tri[1][0] - tri[0][0]) * (tri[2][1] - tri[0][1]) -
                     (tri[2][0] - tri[0][0]) * (tri[1][1] - tri[0][1]);
  const double l1 = ((p[0] - tri[0][0]) * (tri[2][1] - tri[0][1]) -
                     (tri[2][0] - tri[0][0]) * (p[1] - tri[0][1])) /
                    det;
  const double l2 = ((tri[1][0] - tri[0][0]) * (p[1] - tri[0][1]) -
                     (p[0] - tri[0][0]) * (tri[1][1] - tri[0][1])) /
                    det;
  return {1.0 - l1 - l2, l1, l2};
}

// Sutherland-Hodgman against the half-plane sign * (p[axis] - bound) >= 0.
std::vector<Point> clip(const std::vector<Point>& poly, int axis, double bound, double sign) {
  std::vector<Point> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    const double da = sign * (a[axis] - bound);
    const double db = sign * (b[axis] - bound);
    if (da >= 0.0) out.push_back(a);
    if ((da >= 0.0) != (db >= 0.0)) {
      const double s = da / (da - db);
      out.push_back({a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])});
    }
  }
  return out;
}

void add_box_load(const Mesh& mesh, const datum::IndicatorBox& box, Vector& b) {
  const auto& nodes = mesh.nodes();
  for (const auto& cell : mesh.cells()) {
    const std::array<Point, 3> tri{nodes[cell[0]], nodes[cell[1]], nodes[cell[2]]};
    std::vector<Point> poly(tri.begin(), tri.end());
    poly = clip(poly, 0, box.x0, 1.0);
    poly = clip(poly, 0, box.x1, -1.0);
    poly = clip(poly, 1, box.y0, 1.0);
    poly = clip(poly, 1, box.y1, -1.0);
    if (poly.size() < 3) continue;
    // Fan triangulation; the centroid rule is exact for the linear hats.
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
      const Point& p0 = poly[0];
      const Point& p1 = poly[i];
      const Point& p2 = poly[i + 1];
      const double area =
          0.5 * std::fabs((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
      const Point centroid{(p0[0] + p1[0] + p2[0]) / 3.0, (p0[1] + p1[1] + p2[1]) / 3.0};
      const auto weights = barycentric(tri, centroid);
      for (int v = 0; v < 3; ++v) {
        const int dof = mesh.dof_of_node(cell[v]);
        if (dof >= 0) b[dof] += area * weights[v];
      }
    }
  }
}

// Exact line integral of the hats along a segment: split where it crosses
// mesh lines x = ih, y = jh, x - y = kh; hats are linear on each piece.
void add_segment_load(const Mesh& mesh, const Point& a, const Point& c, Vector& b) {
  const int n = mesh.resolution();
  const double dx = c[0] - a[0];
  const double dy = c[1] - a[1];
  const double length = std::hypot(dx, dy);
  std::vector<double> cuts{0.0, 1.0};
  auto add_cuts = [&](double start, double slope) {
    // parameters s with (start + slope s) * n integral
    if (std::fabs(slope) < 1e-15) return;
    const double v0 = start * n;
    const double v1 = (start + slope) * n;
    const int lo = static_cast<int>(std::ceil(std::min(v0, v1)));
    const int hi = static_cast<int>(std::floor(std::max(v0, v1)));
    for (int k = lo; k <= hi; ++k) {
      const double s = (k / double(n) - start) / slope;
      if (s > 0.0 && s < 1.0) cuts.push_back(s);
    }
  };
  add_cuts(a[0], dx);
  add_cuts(a[1], dy);
  add_cuts(a[0] - a[1], dx - dy);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double piece = (cuts[i + 1] - cuts[i]) * length;
    if (piece <= 0.0) continue;
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    for (const auto& [dof, value] : mesh.hats_at(a[0] + mid * dx, a[1] + mid * dy)) {
      b[dof] += piece * value;
    }
  }
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

FemSystem::FemSystem(Mesh mesh) : mesh_(std::move(mesh)), cache_(std::make_shared<Cache>()) {
  const int n = mesh_.dof_count();
  std::vector<Eigen::Triplet<double>> mass_entries;
  std::vector<Eigen::Triplet<double>> stiffness_entries;
  const auto& nodes = mesh_.nodes();
  const double h = mesh_.h();
  for (const auto& cell : mesh_.cells()) {
    const int verts = cell[2] < 0 ? 2 : 3;
    double me[3][3] = {};
    double ke[3][3] = {};
    if (verts == 2) {
      me[0][0] = me[1][1] = h / 3.0;
      me[0][1] = me[1][0] = h / 6.0;
      ke[0][0] = ke[1][1] = 1.0 / h;
      ke[0][1] = ke[1][0] = -1.0 / h;
    } else {
      const Point& p0 = nodes[cell[0]];
      const Point& p1 = nodes[cell[1]];
      const Point& p2 = nodes[cell[2]];
      const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
      const double area = 0.5 * std::fabs(det);
      // grad of barycentric i is the rotated opposite edge over det
      const double gx[3] = {(p1[1] - p2[1]) / det, (p2[1] - p0[1]) / det, (p0[1] - p1[1]) / det};
      const double gy[3] = {(p2[0] - p1[0]) / det, (p0[0] - p2[0]) / det, (p1[0] - p0[0]) / det};
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          me[i][j] = area / 12.0 * (i == j ? 2.0 : 1.0);
          ke[i][j] = area * (gx[i] * gx[j] + gy[i] * gy[j]);
        }
      }
    }
    for (int i = 0; i < verts; ++i) {
      const int di = mesh_.dof_of_node(cell[i]);
      if (di < 0) continue;
      for (int j = 0; j < verts; ++j) {
        const int dj = mesh_.dof_of_node(cell[j]);
        if (dj < 0) continue;
        mass_entries.emplace_back(di, dj, me[i][j]);
        stiffness_entries.emplace_back(di, dj, ke[i][j]);
      }
    }
  }
  mass_.resize(n, n);
  stiffness_.resize(n, n);
  mass_.setFromTriplets(mass_entries.begin(), mass_entries.end());
  stiffness_.setFromTriplets(stiffness_entries.begin(), stiffness_entries.end());
  // Exact zeros from cancellation (diagonal couplings on the square) are
  // dropped so the sparsity pattern is the true one.
  stiffness_.prune(0.0, 1e-14);
}

FemSystem assemble(const Mesh& mesh) { return FemSystem(mesh); }

const DiscreteEigen& FemSystem::eigen() const {
  std::call_once(cache_->eigen_once, [this] {
    const int n = dofs();
    Eigen::MatrixXd a = Eigen::MatrixXd(stiffness_);
    Eigen::MatrixXd b = Eigen::MatrixXd(mass_);
    Vector w(n);
    const lapack_int info = LAPACKE_dsygvd(LAPACK_COL_MAJOR, 1, 'V', 'U', n, a.data(), n,
                                           b.data(), n, w.data());
    if (info != 0) {
      throw NumericalError("discrete eigensolve failed (dsygvd info " + std::to_string(info) +
                           ")");
    }
    for (int j = 0; j < n; ++j) {
      Eigen::Index at = 0;
      a.col(j).cwiseAbs().maxCoeff(&at);
      if (a(at, j) < 0.0) a.col(j) *= -1.0;
    }
    cache_->eigen.values = std::move(w);
    cache_->eigen.vectors = std::move(a);
  });
  return cache_->eigen;
}

Vector FemSystem::solve_mass(const Vector& b) const {
  std::call_once(cache_->mass_once, [this] { cache_->mass_llt.compute(mass_); });
  if (cache_->mass_llt.info() != Eigen::Success) {
    throw NumericalError("mass matrix factorization failed");
  }
  return cache_->mass_llt.solve(b);
}

Vector FemSystem::solve_stiffness(const Vector& b) const {
  std::call_once(cache_->stiffness_once, [this] { cache_->stiffness_llt.compute(stiffness_); });
  if (cache_->stiffness_llt.info() != Eigen::Success) {
    throw NumericalError("stiffness matrix factorization failed");
  }
  return cache_->stiffness_llt.solve(b);
}

Vector load_vector(const Mesh& mesh, const SpatialDatum& d) {
  validate(d, mesh.domain());
  const int n = mesh.dof_count();
  const double h = mesh.h();
  Vector b = Vector::Zero(n);
  std::visit(
      overloaded{
          [](const datum::Zero&) {},
          [&](const datum::Sine& s) {
            const double a = s.j * kPi;
            if (s.k == 0) {
              const double ft = hat_transform_1d(a, h);
              for (int i = 0; i < n; ++i) {
                b[i] = s.amplitude * std::sin(a * mesh.dof_point(i)[0]) * ft;
              }
              return;
            }
            const double c = s.k * kPi;
            const double ft_minus = hat_transform_2d(a, -c, h);
            const double ft_plus = hat_transform_2d(a, c, h);
            for (int i = 0; i < n; ++i) {
              const auto p = mesh.dof_point(i);
              b[i] = 0.5 * s.amplitude *
                     (std::cos(a * p[0] - c * p[1]) * ft_minus -
                      std::cos(a * p[0] + c * p[1]) * ft_plus);
            }
          },
          [&](const datum::Bubble& bubble) {
            for (int i = 0; i < n; ++i) {
              const double x = mesh.dof_point(i)[0];
              b[i] = bubble.amplitude * (x * h - x * x * h - h * h * h / 6.0);
            }
          },
          [&](const datum::Indicator& c) {
            for (int i = 0; i < n; ++i) {
              const double x = mesh.dof_point(i)[0];
              b[i] = h * (hat_antiderivative((c.b - x) / h) - hat_antiderivative((c.a - x) / h));
            }
          },
          [&](const datum::Dirac& p) {
            for (const auto& [dof, value] : mesh.hats_at(p.x0)) b[dof] += value;
          },
          [&](const datum::IndicatorBox& box) { add_box_load(mesh, box, b); },
          [&](const datum::DiracSquareBoundary& g) {
            const Point c00{g.lo, g.lo}, c10{g.hi, g.lo}, c11{g.hi, g.hi}, c01{g.lo, g.hi};
            add_segment_load(mesh, c00, c10, b);
            add_segment_load(mesh, c10, c11, b);
            add_segment_load(mesh, c11, c01, b);
            add_segment_load(mesh, c01, c00, b);
          },
          [&](const datum::Function& f) {
            using boost::math::quadrature::gauss;
            for (int i = 0; i < n; ++i) {
              const double x = mesh.dof_point(i)[0];
              auto left = [&](double s) { return f.value(s) * (s - (x - h)) / h; };
              auto right = [&](double s) { return f.value(s) * ((x + h) - s) / h; };
              b[i] = gauss<double, 20>::integrate(left, x - h, x) +
                     gauss<double, 20>::integrate(right, x, x + h);
            }
          },
      },
      d);
  return b;
}

Vector gradient_load(const Mesh& mesh, const SpatialDatum& d) {
  validate(d, mesh.domain());
  if (!has_gradient(d)) {
    throw std::invalid_argument(
        "gradient_load: datum has no H1 regularity (use the L2 projection)");
  }
  const int n = mesh.dof_count();
  if (mesh.domain() == DomainKind::Interval) {
    // (v', hat_i') = (2 v(x_i) - v(x_i - h) - v(x_i + h)) / h for any H1 v.
    const double h = mesh.h();
    Vector b(n);
    for (int i = 0; i < n; ++i) {
      const double x = mesh.dof_point(i)[0];
      b[i] = (2.0 * evaluate(d, x) - evaluate(d, x - h) - evaluate(d, x + h)) / h;
    }
    return b;
  }
  // On the square the only H1 data are sines: -Laplace(v) = lambda v.
  if (const auto* s = std::get_if<datum::Sine>(&d)) {
    const double lambda = kPi * kPi * (double(s->j) * s->j + double(s->k) * s->k);
    return lambda * load_vector(mesh, d);
  }
  return Vector::Zero(n);
}

Vector interpolate(const Mesh& mesh, const SpatialDatum& d) {
  Vector c(mesh.dof_count());
  for (int i = 0; i < mesh.dof_count(); ++i) {
    const auto p = mesh.dof_point(i);
    c[i] = evaluate(d, p[0], p[1]);
  }
  return c;
}

Vector l2_project(const FemSystem& system, const SpatialDatum& d) {
  return system.solve_mass(load_vector(system.mesh(), d));
}

Vector ritz_project(const FemSystem& system, const SpatialDatum& d) {
  return system.solve_stiffness(gradient_load(system.mesh(), d));
}

double discrete_hs_norm(const FemSystem& system, const Vector& c, double p) {
  const auto& eig = system.eigen();
  const Vector coeffs = eig.vectors.transpose() * (system.mass() * c);
  long double total = 0.0L;
  for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
    total += std::pow(static_cast<long double>(eig.values[j]), p) * coeffs[j] * coeffs[j];
  }
  return static_cast<double>(std::sqrt(total));
}

double l2_norm(const FemSystem& system, const Vector& c) {
  return std::sqrt(std::max(0.0, c.dot(system.mass() * c)));
}

double h1_seminorm(const FemSystem& system, const Vector& c) {
  return std::sqrt(std::max(0.0, c.dot(system.stiffness() * c)));
}

std::vector<double> mode_pairing(const Mesh& mesh, const Vector& c,
                                 const std::vector<SpectralMode>& modes) {
  const int n = mesh.resolution();
  const double h = mesh.h();
  std::vector<double> out(modes.size(), 0.0);
  if (mesh.domain() == DomainKind::Interval) {
    const double root2 = std::sqrt(2.0);
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const double a = modes[m].j * kPi;
      long double acc = 0.0L;
      for (int i = 0; i < mesh.dof_count(); ++i) acc += c[i] * std::sin(a * (i + 1) * h);
      out[m] = root2 * hat_transform_1d(a, h) * static_cast<double>(acc);
    }
    return out;
  }
  // sum_i c_i cos(a x_i -+ b y_i) = A +- B with A = Cx C Cy^T, B = Sx C Sy^T.
  int jmax = 0;
  int kmax = 0;
  for (const auto& mode : modes) {
    jmax = std::max(jmax, mode.j);
    kmax = std::max(kmax, mode.k);
  }
  const int m1 = n - 1;
  const Eigen::Map<const Eigen::MatrixXd> grid(c.data(), m1, m1);  // (i-1, j-1)
  auto table = [&](int count, bool cosine) {
    Eigen::MatrixXd t(count, m1);
    for (int j = 0; j < count; ++j) {
      for (int p = 0; p < m1; ++p) {
        const double arg = (j + 1) * kPi * (p + 1) * h;
        t(j, p) = cosine ? std::cos(arg) : std::sin(arg);
      }
    }
    return t;
  };
  const Eigen::MatrixXd a = table(jmax, true) * grid * table(kmax, true).transpose();
  const Eigen::MatrixXd b = table(jmax, false) * grid * table(kmax, false).transpose();
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const int j = modes[m].j;
    const int k = modes[m].k;
    const double p = j * kPi;
    const double q = k * kPi;
    const double minus = hat_transform_2d(p, -q, h);
    const double plus = hat_transform_2d(p, q, h);
    out[m] = a(j - 1, k - 1) * (minus - plus) + b(j - 1, k - 1) * (minus + plus);
  }
  return out;
}

void dump_system(const FemSystem& system, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const Mesh& mesh = system.mesh();
  {
    std::ofstream os(dir / "nodes.csv");
    os.precision(17);
    os << "node,x,y,dof\n";
    for (std::size_t i = 0; i < mesh.nodes().size(); ++i) {
      os << i << ',' << mesh.nodes()[i][0] << ',' << mesh.nodes()[i][1] << ','
         << mesh.dof_of_node(static_cast<int>(i)) << '\n';
    }
  }
  {
    std::ofstream os(dir / "cells.csv");
    os << "cell,v0,v1,v2\n";
    for (std::size_t i = 0; i < mesh.cells().size(); ++i) {
      const auto& cell = mesh.cells()[i];
      os << i << ',' << cell[0] << ',' << cell[1] << ',' << cell[2] << '\n';
    }
  }
  auto write_coo = [&](const SparseMatrix& matrix, const char* name) {
    std::ofstream os(dir / name);
    os.precision(17);
    os << "% " << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonZeros() << '\n';
    for (int col = 0; col < matrix.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(matrix, col); it; ++it) {
        os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
      }
    }
  };
  write_coo(system.mass(), "mass.coo");
  write_coo(system.stiffness(), "stiffness.coo");
}

}  // namespace fracfem
