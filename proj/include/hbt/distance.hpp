#pragma once

#include "hbt/symbol.hpp"

namespace hbt {

/// Distance from z to sigma(T_phi), modelled as the curve together with every
/// point of nonzero winding number.
inline double dist_to_spectrum(SymbolCurve const& c, cplx z) {
  double const d = dist_to_curve(c, z);
  if (d <= 1e-12 * c.scale()) return 0.0;
  return winding_number(c, z) != 0 ? 0.0 : d;
}

}  // namespace hbt
