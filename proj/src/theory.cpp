#include "mfa/theory.hpp"

#include <cmath>

namespace mfa {

double carpet_dimension() { return std::log(8.0) / std::log(3.0); }

std::vector<SpectrumPoint> cascade_spectrum(const CascadeWeights& weights, const QGrid& qgrid) {
  const double ln2 = std::log(2.0);
  std::vector<SpectrumPoint> out;
  out.reserve(qgrid.size());
  for (double q : qgrid.values()) {
    double z = 0.0;
    for (double p : weights) {
      if (p > 0.0) z += std::pow(p, q);
    }
    double alpha = 0.0;
    double entropy = 0.0;
    for (double p : weights) {
      if (p <= 0.0) continue;
      const double m = std::pow(p, q) / z;
      alpha -= m * std::log(p) / ln2;
      entropy -= p * std::log(p) / ln2;
    }
    SpectrumPoint pt;
    pt.q = q;
    pt.tau = -std::log(z) / ln2;
    pt.d_q = q == 1.0 ? entropy : pt.tau / (q - 1.0);
    pt.alpha = alpha;
    pt.f_alpha = q * alpha - pt.tau;
    pt.r2_tau = pt.r2_alpha = pt.r2_f = 1.0;
    out.push_back(pt);
  }
  return out;
}

}  // namespace mfa
