#pragma once

// The catalog of test problems: a smooth manufactured solution and the
// nonsmooth / very weak data examples on the interval and the square.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fracfem/data.hpp"
#include "fracfem/domain.hpp"
#include "fracfem/orders.hpp"

namespace fracfem {

enum class ReferenceKind { Spectral, Manufactured };

struct DataCase {
  std::string name;
  std::string description;
  DomainKind domain = DomainKind::Interval;
  SpatialDatum initial = datum::Zero{};
  std::vector<SourceTerm> sources;
  /// Supremum of the admissible Sobolev index q of the data (v in H^q, or
  /// f in L^inf(H^q)); the data lie in H^{q - eps} for every eps > 0.
  double regularity = 2.0;
  ReferenceKind reference = ReferenceKind::Spectral;
  /// Expected spatial rates (L2, H1) on meshes not aligned with the data.
  double theory_l2 = 2.0;
  double theory_h1 = 1.0;
  /// Manufactured solution at time t, for ReferenceKind::Manufactured.
  std::function<SpatialDatum(double)> exact;

  bool homogeneous() const { return sources.empty(); }
  /// Measures sit at x = 1/2; meshes h = 1/(2^k + 1) avoid it.
  bool needs_unaligned_mesh() const;
  /// ||v||_{L2} when v is a nonzero function, 1 for measures and v = 0.
  double normalization() const;
  /// Predicted exponent of the error growth as t -> 0 at fixed h,
  /// -alpha (1 - max(q/2, 0)), for homogeneous data with q < 2.
  double blowup_exponent(double alpha) const;
};

std::vector<std::string> case_names();

/// Throws std::invalid_argument for unknown names. The manufactured source
/// depends on the orders.
DataCase make_case(std::string_view name, const FracOrders& orders);

}  // namespace fracfem
