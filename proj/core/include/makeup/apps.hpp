#pragma once

#include <vector>

#include "makeup/prior.hpp"
#include "makeup/uvtex.hpp"

namespace makeup {

/// Apply a stored makeup style to a new bare face. Equivalent to
/// compose_alpha_blend(decode(prior, coeffs), bare_new).
UvMap transfer(const PcaPrior& prior, const Coefficients& coeffs,
               const UvMap& bare_new);

/// (1-t)*a + t*b elementwise.
Coefficients lerp_coeffs(const Coefficients& a, const Coefficients& b, double t);

/// Per-index style mixing: take b where the mask is set, a elsewhere.
Coefficients mix_coeffs(const Coefficients& a, const Coefficients& b,
                        const std::vector<uint8_t>& take_from_b);

/// Bilinear blend of four corner coefficient vectors.
Coefficients bilerp_coeffs(const Coefficients& c00, const Coefficients& c01,
                           const Coefficients& c10, const Coefficients& c11,
                           double u, double v);

/// Scale the alpha matte by t, bases unchanged.
MakeupLayer fade_alpha(const MakeupLayer& layer, double t);

/// Pixelwise blend of two layers (bases and alpha each by (1-t)/t).
MakeupLayer lerp_layers(const MakeupLayer& a, const MakeupLayer& b, double t);

}  // namespace makeup
