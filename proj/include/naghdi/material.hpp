#pragma once

#include <stdexcept>

namespace naghdi {

// Homogeneous isotropic shell material. alpha/beta/gamma are always derived
// from (E, mu, h), never stored.
struct MaterialParams {
  double E_young = 1.0;
  double mu_poisson = 0.3;
  double h_thickness = 0.01;

  void validate() const {
    if (!(E_young > 0.0)) throw std::invalid_argument("Young modulus must be positive");
    if (!(mu_poisson > 0.0 && mu_poisson < 0.5))
      throw std::invalid_argument("Poisson ratio must lie in (0, 1/2)");
    if (!(h_thickness > 0.0)) throw std::invalid_argument("thickness must be positive");
  }

  double alpha() const { return E_young / (1.0 + mu_poisson); }
  double beta() const { return mu_poisson / (1.0 - 2.0 * mu_poisson); }
  double gamma() const { return h_thickness * h_thickness / 12.0; }
};

}  // namespace naghdi
