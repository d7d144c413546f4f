#include "fracfem/cases.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracfem {

bool DataCase::needs_unaligned_mesh() const {
  if (is_measure(initial)) return domain == DomainKind::Interval;
  return std::any_of(sources.begin(), sources.end(),
                     [&](const SourceTerm& s) { return is_measure(s.space) && domain == DomainKind::Interval; });
}

double DataCase::normalization() const {
  if (is_measure(initial) || is_zero(initial)) return 1.0;
  return l2_norm(initial);
}

double DataCase::blowup_exponent(double alpha) const {
  return -alpha * (1.0 - std::max(regularity / 2.0, 0.0));
}

std::vector<std::string> case_names() {
  return {"smooth", "2a", "2b", "2c", "3a", "3b", "4a", "4b", "4c"};
}

namespace {

// (1 + t^2) x (1 - x) solves the equation with
// f = [d^a + sum b_i d^{a_i}](t^2) x (1 - x) + 2 (1 + t^2).
DataCase smooth_case(const FracOrders& orders) {
  DataCase c;
  c.name = "smooth";
  c.description = "u = (1 + t^2) x (1 - x), manufactured source";
  c.initial = datum::Bubble{1.0};
  c.regularity = 2.0;
  c.reference = ReferenceKind::Manufactured;
  std::vector<std::pair<double, double>> terms{{orders.alpha(), 1.0}};
  for (const auto& lo : orders.lower()) terms.emplace_back(lo.order, lo.weight);
  TimeProfile caputo;
  caputo.generic = [terms](double t) {
    double total = 0.0;
    for (const auto& [order, weight] : terms) {
      total += weight * 2.0 * std::pow(t, 2.0 - order) / std::tgamma(3.0 - order);
    }
    return total;
  };
  TimeProfile diffusion;
  diffusion.generic = [](double t) { return 2.0 * (1.0 + t * t); };
  c.sources.push_back({datum::Bubble{1.0}, caputo});
  c.sources.push_back({datum::Indicator{0.0, 1.0}, diffusion});
  c.exact = [](double t) -> SpatialDatum { return datum::Bubble{1.0 + t * t}; };
  return c;
}

TimeProfile switched(double start, double end) {
  TimeProfile g;
  g.base = 1.0;
  g.pulses.push_back({start, end, 1.0});
  return g;
}

}  // namespace

DataCase make_case(std::string_view name, const FracOrders& orders) {
  if (name == "smooth") return smooth_case(orders);
  DataCase c;
  c.name = std::string(name);
  if (name == "2a") {
    c.description = "v = sin(2 pi x)";
    c.initial = datum::Sine{2, 0, 1.0};
    c.regularity = 2.0;
  } else if (name == "2b") {
    c.description = "v = indicator of (0, 1/2]";
    c.initial = datum::Indicator{0.0, 0.5};
    c.regularity = 0.5;
  } else if (name == "2c") {
    c.description = "v = delta at x = 1/2";
    c.initial = datum::Dirac{0.5};
    c.regularity = -0.5;
    c.theory_l2 = 1.5;
    c.theory_h1 = 0.5;
  } else if (name == "3a") {
    c.description = "f = (indicator_[1/2,1](t) + 1) indicator_[0,1/2](x)";
    c.sources.push_back({datum::Indicator{0.0, 0.5}, switched(0.5, 1.0)});
    c.regularity = 0.5;
  } else if (name == "3b") {
    c.description = "f = (indicator_[1/2,1](t) + 1) delta at x = 1/2";
    c.sources.push_back({datum::Dirac{0.5}, switched(0.5, 1.0)});
    c.regularity = -0.5;
    c.theory_l2 = 1.5;
    c.theory_h1 = 0.5;
  } else if (name == "4a") {
    c.description = "v = indicator of (0,1/2) x (0,1)";
    c.domain = DomainKind::Square;
    c.initial = datum::IndicatorBox{0.0, 0.5, 0.0, 1.0};
    c.regularity = 0.5;
  } else if (name == "4b") {
    c.description = "v = line mass on the boundary of [1/4,3/4]^2";
    c.domain = DomainKind::Square;
    c.initial = datum::DiracSquareBoundary{0.25, 0.75};
    c.regularity = -0.5;
  } else if (name == "4c") {
    c.description = "f = (indicator_[1/20,1/10](t) + 1) indicator of (0,1/2) x (0,1)";
    c.domain = DomainKind::Square;
    c.sources.push_back({datum::IndicatorBox{0.0, 0.5, 0.0, 1.0}, switched(0.05, 0.1)});
    c.regularity = 0.5;
  } else {
    throw std::invalid_argument("unknown case '" + std::string(name) + "'");
  }
  return c;
}

}  // namespace fracfem
