#include "makeup/apps.hpp"

namespace makeup {

namespace {

void require_same_length(const Coefficients& a, const Coefficients& b) {
    if (a.values.size() != b.values.size())
        throw DimensionError("coefficient lengths differ");
}

}  // namespace

UvMap transfer(const PcaPrior& prior, const Coefficients& coeffs,
               const UvMap& bare_new) {
    return compose_alpha_blend(decode(prior, coeffs), bare_new);
}

Coefficients lerp_coeffs(const Coefficients& a, const Coefficients& b, double t) {
    require_same_length(a, b);
    return {(1.0 - t) * a.values + t * b.values};
}

Coefficients mix_coeffs(const Coefficients& a, const Coefficients& b,
                        const std::vector<uint8_t>& take_from_b) {
    require_same_length(a, b);
    if (static_cast<Eigen::Index>(take_from_b.size()) != a.values.size())
        throw DimensionError("mix mask length does not match coefficients");
    Coefficients out = a;
    for (size_t i = 0; i < take_from_b.size(); ++i)
        if (take_from_b[i]) out.values[static_cast<Eigen::Index>(i)] = b.values[static_cast<Eigen::Index>(i)];
    return out;
}

Coefficients bilerp_coeffs(const Coefficients& c00, const Coefficients& c01,
                           const Coefficients& c10, const Coefficients& c11,
                           double u, double v) {
    require_same_length(c00, c01);
    require_same_length(c00, c10);
    require_same_length(c00, c11);
    return {(1.0 - u) * (1.0 - v) * c00.values + (1.0 - u) * v * c01.values +
            u * (1.0 - v) * c10.values + u * v * c11.values};
}

MakeupLayer fade_alpha(const MakeupLayer& layer, double t) {
    MakeupLayer out = layer;
    for (double& a : out.alpha.values) a *= t;
    return out;
}

MakeupLayer lerp_layers(const MakeupLayer& a, const MakeupLayer& b, double t) {
    if (!a.bases.same_shape(b.bases) || !a.alpha.same_shape(b.alpha))
        throw DimensionError("lerp_layers: layer dimensions differ");
    MakeupLayer out = a;
    for (size_t i = 0; i < out.bases.values.size(); ++i)
        out.bases.values[i] = (1.0 - t) * a.bases.values[i] + t * b.bases.values[i];
    for (size_t i = 0; i < out.alpha.values.size(); ++i)
        out.alpha.values[i] = (1.0 - t) * a.alpha.values[i] + t * b.alpha.values[i];
    return out;
}

}  // namespace makeup
