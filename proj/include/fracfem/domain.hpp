#pragma once

#include <string>
#include <string_view>

namespace fracfem {

/// The unit interval (0,1) or the unit square (0,1)^2.
enum class DomainKind { Interval, Square };

int dimension(DomainKind kind);
std::string_view to_string(DomainKind kind);
/// Accepts "interval"/"1d" and "square"/"2d".
DomainKind parse_domain(std::string_view name);

/// One Dirichlet Laplacian eigenpair. Interval: phi_j = sqrt2 sin(j pi x),
/// lambda = (j pi)^2, k unused (0). Square: phi_jk = 2 sin(j pi x) sin(k pi y),
/// lambda = (j^2 + k^2) pi^2.
struct SpectralMode {
  int j = 1;
  int k = 0;
  double lambda = 0.0;

  double eval(double x, double y = 0.0) const;
};

}  // namespace fracfem
