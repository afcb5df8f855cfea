#pragma once

#include <algorithm>
#include <cmath>
#include <span>

namespace nernst::spin {

/// von Neumann entropy -sum p ln p of the Gibbs weights of a spectrum,
/// evaluated as ln Z + beta <E - E0> with energies measured from the ground
/// level. Both terms are non-negative, so small entropies keep full relative
/// precision; ln Z goes through log1p of the excited weight.
inline double entropy_from_spectrum(std::span<const double> energies, double beta) {
  if (energies.empty()) return 0.0;
  const double e0 = *std::min_element(energies.begin(), energies.end());
  double ground = 0.0;
  double excited = 0.0;
  double excess = 0.0;
  for (double e : energies) {
    const double de = e - e0;
    if (de == 0.0) {
      ground += 1.0;
      continue;
    }
    const double w = std::exp(-beta * de);
    excited += w;
    excess += de * w;
  }
  const double z = ground + excited;
  return std::log(ground) + std::log1p(excited / ground) + beta * excess / z;
}

}  // namespace nernst::spin
