#include "fracfem/data.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fracfem {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// int_lo^hi sin(n pi x) dx
double sine_integral(int n, double lo, double hi) {
  return (std::cos(n * kPi * lo) - std::cos(n * kPi * hi)) / (n * kPi);
}

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

int dimension(DomainKind kind) { return kind == DomainKind::Interval ? 1 : 2; }

std::string_view to_string(DomainKind kind) {
  return kind == DomainKind::Interval ? "interval" : "square";
}

DomainKind parse_domain(std::string_view name) {
  if (name == "interval" || name == "1d") return DomainKind::Interval;
  if (name == "square" || name == "2d") return DomainKind::Square;
  throw std::invalid_argument("unknown domain '" + std::string(name) + "'");
}

double SpectralMode::eval(double x, double y) const {
  if (k == 0) return kSqrt2 * std::sin(j * kPi * x);
  return 2.0 * std::sin(j * kPi * x) * std::sin(k * kPi * y);
}

void validate(const SpatialDatum& d, DomainKind domain) {
  const bool interval = domain == DomainKind::Interval;
  std::visit(
      overloaded{
          [](const datum::Zero&) {},
          [&](const datum::Sine& s) {
            require(s.j >= 1 && s.k >= 0, "sine datum: indices must be positive");
            require((s.k == 0) == interval, "sine datum: k > 0 exactly on the square");
          },
          [&](const datum::Bubble&) { require(interval, "bubble datum lives on the interval"); },
          [&](const datum::Indicator& c) {
            require(interval, "indicator datum lives on the interval");
            require(0.0 <= c.a && c.a < c.b && c.b <= 1.0, "indicator: need 0 <= a < b <= 1");
          },
          [&](const datum::Dirac& p) {
            require(interval, "dirac datum lives on the interval");
            require(p.x0 > 0.0 && p.x0 < 1.0, "dirac: x0 must be interior");
          },
          [&](const datum::IndicatorBox& b) {
            require(!interval, "box indicator lives on the square");
            require(0.0 <= b.x0 && b.x0 < b.x1 && b.x1 <= 1.0 && 0.0 <= b.y0 &&
                        b.y0 < b.y1 && b.y1 <= 1.0,
                    "box indicator: box must be a nonempty subset of the square");
          },
          [&](const datum::DiracSquareBoundary& g) {
            require(!interval, "line mass lives on the square");
            require(0.0 < g.lo && g.lo < g.hi && g.hi < 1.0,
                    "line mass: need 0 < lo < hi < 1");
          },
          [&](const datum::Function& f) {
            require(interval, "function datum lives on the interval");
            require(static_cast<bool>(f.value), "function datum: empty callable");
          },
      },
      d);
}

bool is_zero(const SpatialDatum& d) { return std::holds_alternative<datum::Zero>(d); }

bool is_measure(const SpatialDatum& d) {
  return std::holds_alternative<datum::Dirac>(d) ||
         std::holds_alternative<datum::DiracSquareBoundary>(d);
}

bool has_gradient(const SpatialDatum& d) {
  return std::holds_alternative<datum::Zero>(d) || std::holds_alternative<datum::Sine>(d) ||
         std::holds_alternative<datum::Bubble>(d);
}

double l2_norm(const SpatialDatum& d) {
  return std::visit(
      overloaded{
          [](const datum::Zero&) { return 0.0; },
          [](const datum::Sine& s) {
            return std::fabs(s.amplitude) / (s.k == 0 ? kSqrt2 : 2.0);
          },
          [](const datum::Bubble& b) { return std::fabs(b.amplitude) / std::sqrt(30.0); },
          [](const datum::Indicator& c) { return std::sqrt(c.b - c.a); },
          [](const datum::Dirac&) { return std::numeric_limits<double>::infinity(); },
          [](const datum::IndicatorBox& b) { return std::sqrt((b.x1 - b.x0) * (b.y1 - b.y0)); },
          [](const datum::DiracSquareBoundary&) {
            return std::numeric_limits<double>::infinity();
          },
          [](const datum::Function& f) {
            auto sq = [&](double x) {
              const double v = f.value(x);
              return v * v;
            };
            return std::sqrt(
                boost::math::quadrature::gauss_kronrod<double, 61>::integrate(sq, 0.0, 1.0, 20,
                                                                              1e-13));
          },
      },
      d);
}

double h1_seminorm(const SpatialDatum& d) {
  if (const auto* s = std::get_if<datum::Sine>(&d)) {
    const double freq = kPi * std::sqrt(double(s->j) * s->j + double(s->k) * s->k);
    return freq * l2_norm(d);
  }
  if (const auto* b = std::get_if<datum::Bubble>(&d)) {
    return std::fabs(b->amplitude) / std::sqrt(3.0);
  }
  if (is_zero(d)) return 0.0;
  throw std::invalid_argument("h1_seminorm: datum has no H1 regularity");
}

double evaluate(const SpatialDatum& d, double x, double y) {
  return std::visit(
      overloaded{
          [](const datum::Zero&) { return 0.0; },
          [&](const datum::Sine& s) {
            const double v = s.amplitude * std::sin(s.j * kPi * x);
            return s.k == 0 ? v : v * std::sin(s.k * kPi * y);
          },
          [&](const datum::Bubble& b) { return b.amplitude * x * (1.0 - x); },
          [&](const datum::Indicator& c) { return (x >= c.a && x <= c.b) ? 1.0 : 0.0; },
          [&](const datum::IndicatorBox& b) {
            return (x > b.x0 && x < b.x1 && y > b.y0 && y < b.y1) ? 1.0 : 0.0;
          },
          [&](const datum::Function& f) { return f.value(x); },
          [](const auto&) -> double {
            throw std::invalid_argument("evaluate: measures have no pointwise values");
          },
      },
      d);
}

double spectral_coefficient(const SpatialDatum& d, const SpectralMode& mode) {
  const int j = mode.j;
  const int k = mode.k;
  return std::visit(
      overloaded{
          [](const datum::Zero&) { return 0.0; },
          [&](const datum::Sine& s) {
            if (s.j != j || s.k != k) return 0.0;
            return s.amplitude / (k == 0 ? kSqrt2 : 2.0);
          },
          [&](const datum::Bubble& b) {
            if (j % 2 == 0) return 0.0;
            return b.amplitude * kSqrt2 * 4.0 / std::pow(j * kPi, 3);
          },
          [&](const datum::Indicator& c) { return kSqrt2 * sine_integral(j, c.a, c.b); },
          [&](const datum::Dirac& p) { return kSqrt2 * std::sin(j * kPi * p.x0); },
          [&](const datum::IndicatorBox& b) {
            return 2.0 * sine_integral(j, b.x0, b.x1) * sine_integral(k, b.y0, b.y1);
          },
          [&](const datum::DiracSquareBoundary& g) {
            // Bottom/top edges carry int sin(j pi x) dx times sin(k pi y) at the
            // edge; left/right edges likewise with the roles swapped.
            const double edge_x = sine_integral(j, g.lo, g.hi) *
                                  (std::sin(k * kPi * g.lo) + std::sin(k * kPi * g.hi));
            const double edge_y = sine_integral(k, g.lo, g.hi) *
                                  (std::sin(j * kPi * g.lo) + std::sin(j * kPi * g.hi));
            return 2.0 * (edge_x + edge_y);
          },
          [&](const datum::Function& f) {
            auto g = [&](double x) { return f.value(x) * kSqrt2 * std::sin(j * kPi * x); };
            // One panel per half period keeps the oscillation resolved.
            const int panels = std::max(1, 2 * j);
            double total = 0.0;
            for (int p = 0; p < panels; ++p) {
              total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                  g, double(p) / panels, double(p + 1) / panels, 10, 1e-13);
            }
            return total;
          },
      },
      d);
}

double TimeProfile::operator()(double t) const {
  if (generic) return generic(t);
  double value = base;
  for (const auto& pulse : pulses) {
    if (t >= pulse.start && t <= pulse.end) value += pulse.height;
  }
  return value;
}

std::vector<double> TimeProfile::switch_times() const {
  std::vector<double> times;
  for (const auto& pulse : pulses) {
    times.push_back(pulse.start);
    times.push_back(pulse.end);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

}  // namespace fracfem
