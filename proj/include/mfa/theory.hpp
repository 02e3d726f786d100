#pragma once

#include <vector>

#include "mfa/imaging.hpp"
#include "mfa/spectrum.hpp"

namespace mfa {

/// ln 8 / ln 3, the similarity dimension of the Sierpinski carpet.
double carpet_dimension();

/// Closed-form spectrum of the four-weight binomial cascade, per q:
/// tau(q) = -log2 sum p^q, D_q = tau/(q-1) (entropy limit at q = 1),
/// alpha = -sum m ln p / ln 2 with m = p^q / sum p^q, f = q alpha - tau.
/// r2 fields are 1.
std::vector<SpectrumPoint> cascade_spectrum(const CascadeWeights& weights, const QGrid& qgrid);

}  // namespace mfa
