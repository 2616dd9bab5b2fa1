#include "makeup/apps.hpp"

#include "doctest.h"
#include "helpers.hpp"

using namespace makeup;

namespace {

PcaPrior small_prior(uint64_t seed) {
    return build_pca(testutil::interior_corpus(6, 12, seed), 4);
}

Coefficients random_coeffs(const PcaPrior& prior, std::mt19937_64& rng,
                           double span = 0.5) {
    Coefficients c = Coefficients::zeros(prior.k);
    for (int i = 0; i < prior.k; ++i)
        c.values[i] = testutil::uniform(rng, -span, span) * prior.stddevs[i];
    return c;
}

}  // namespace

TEST_CASE("transfer equals decode-then-blend") {
    const PcaPrior prior = small_prior(401);
    std::mt19937_64 rng(402);
    const Coefficients c = random_coeffs(prior, rng);
    const UvMap bare = testutil::random_map(rng, 12, 12, 3);
    const UvMap direct = transfer(prior, c, bare);
    const UvMap manual = compose_alpha_blend(decode(prior, c), bare);
    CHECK(direct.values == manual.values);

    CHECK_THROWS_AS(transfer(prior, c, UvMap(5, 5, 3)), DimensionError);
}

TEST_CASE("lerp_coeffs endpoints, midpoint and linearity") {
    const PcaPrior prior = small_prior(403);
    std::mt19937_64 rng(404);
    const Coefficients a = random_coeffs(prior, rng);
    const Coefficients b = random_coeffs(prior, rng);

    CHECK(lerp_coeffs(a, b, 0.0).values == a.values);
    CHECK(lerp_coeffs(a, b, 1.0).values == b.values);
    const Coefficients mid = lerp_coeffs(a, b, 0.5);
    CHECK((mid.values - 0.5 * (a.values + b.values)).lpNorm<Eigen::Infinity>() <
          1e-15);

    // Pre-clamp, decoding commutes with interpolation.
    const Eigen::VectorXd lhs = decode_raw(prior, lerp_coeffs(a, b, 0.3));
    const Eigen::VectorXd rhs =
        0.7 * decode_raw(prior, a) + 0.3 * decode_raw(prior, b);
    CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-12);

    Coefficients longer = Coefficients::zeros(prior.k + 1);
    CHECK_THROWS_AS(lerp_coeffs(a, longer, 0.5), DimensionError);
}

TEST_CASE("mix_coeffs picks per index") {
    Coefficients a{Eigen::Vector3d(1.0, 2.0, 3.0)};
    Coefficients b{Eigen::Vector3d(-1.0, -2.0, -3.0)};
    const Coefficients mixed = mix_coeffs(a, b, {0, 1, 0});
    CHECK(mixed.values == Eigen::Vector3d(1.0, -2.0, 3.0));

    CHECK(mix_coeffs(a, b, {0, 0, 0}).values == a.values);
    CHECK(mix_coeffs(a, b, {1, 1, 1}).values == b.values);
    CHECK_THROWS_AS(mix_coeffs(a, b, {0, 1}), DimensionError);
}

TEST_CASE("bilerp_coeffs corners and separability") {
    const PcaPrior prior = small_prior(405);
    std::mt19937_64 rng(406);
    const Coefficients c00 = random_coeffs(prior, rng);
    const Coefficients c01 = random_coeffs(prior, rng);
    const Coefficients c10 = random_coeffs(prior, rng);
    const Coefficients c11 = random_coeffs(prior, rng);

    CHECK(bilerp_coeffs(c00, c01, c10, c11, 0, 0).values == c00.values);
    CHECK(bilerp_coeffs(c00, c01, c10, c11, 0, 1).values == c01.values);
    CHECK(bilerp_coeffs(c00, c01, c10, c11, 1, 0).values == c10.values);
    CHECK(bilerp_coeffs(c00, c01, c10, c11, 1, 1).values == c11.values);

    // Bilinear = lerp along v of the two u-lerps.
    const double u = 0.35, v = 0.8;
    const Coefficients direct = bilerp_coeffs(c00, c01, c10, c11, u, v);
    const Coefficients via =
        lerp_coeffs(lerp_coeffs(c00, c10, u), lerp_coeffs(c01, c11, u), v);
    CHECK((direct.values - via.values).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("fade_alpha scales only the matte") {
    std::mt19937_64 rng(407);
    const MakeupLayer layer = testutil::random_layer(rng, 6, 6);

    const MakeupLayer off = fade_alpha(layer, 0.0);
    for (double v : off.alpha.values) CHECK(v == 0.0);
    CHECK(off.bases.values == layer.bases.values);

    CHECK(fade_alpha(layer, 1.0).alpha.values == layer.alpha.values);

    const MakeupLayer half = fade_alpha(layer, 0.5);
    for (size_t i = 0; i < layer.alpha.values.size(); ++i)
        CHECK(half.alpha.values[i] ==
              doctest::Approx(0.5 * layer.alpha.values[i]).epsilon(1e-15));

    // Fading to zero makes the composite the bare face.
    const UvMap bare = testutil::random_map(rng, 6, 6, 3);
    CHECK(compose_alpha_blend(off, bare).values == bare.values);
}

TEST_CASE("lerp_layers blends both planes") {
    std::mt19937_64 rng(408);
    const MakeupLayer a = testutil::random_layer(rng, 5, 4);
    const MakeupLayer b = testutil::random_layer(rng, 5, 4);

    CHECK(lerp_layers(a, b, 0.0).bases.values == a.bases.values);
    CHECK(lerp_layers(a, b, 1.0).alpha.values == b.alpha.values);

    const MakeupLayer m = lerp_layers(a, b, 0.25);
    for (size_t i = 0; i < a.bases.values.size(); ++i)
        CHECK(m.bases.values[i] ==
              doctest::Approx(0.75 * a.bases.values[i] + 0.25 * b.bases.values[i])
                  .epsilon(1e-15));
    for (size_t i = 0; i < a.alpha.values.size(); ++i)
        CHECK(m.alpha.values[i] ==
              doctest::Approx(0.75 * a.alpha.values[i] + 0.25 * b.alpha.values[i])
                  .epsilon(1e-15));

    MakeupLayer other = testutil::random_layer(rng, 4, 4);
    CHECK_THROWS_AS(lerp_layers(a, other, 0.5), DimensionError);
}
