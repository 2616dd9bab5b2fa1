#include "makeup/metrics.hpp"

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"

using namespace makeup;

namespace {

FaceMask full_mask(int w, int h) {
    FaceMask m(w, h);
    std::fill(m.bits.begin(), m.bits.end(), uint8_t(1));
    return m;
}

}  // namespace

TEST_CASE("rmse basics") {
    std::mt19937_64 rng(501);
    const UvMap a = testutil::random_map(rng, 8, 8, 3);
    const FaceMask mask = full_mask(8, 8);

    CHECK(rmse(a, a, mask) == 0.0);

    // Constant offset d has rmse exactly d.
    UvMap b = a;
    for (double& v : b.values) v += 0.125;
    CHECK(rmse(a, b, mask) == doctest::Approx(0.125).epsilon(1e-12));

    // Hand-computed two-pixel example.
    UvMap x(2, 1, 1), y(2, 1, 1);
    x.values = {0.0, 0.0};
    y.values = {0.3, 0.4};
    CHECK(rmse(x, y, full_mask(2, 1)) ==
          doctest::Approx(std::sqrt((0.09 + 0.16) / 2)).epsilon(1e-12));

    // Differences outside the mask are ignored.
    FaceMask left(2, 1);
    left.set(0, 0, true);
    CHECK(rmse(x, y, left) == doctest::Approx(0.3).epsilon(1e-12));

    CHECK_THROWS_AS(rmse(a, b, FaceMask(8, 8)), EmptyMaskError);
    CHECK_THROWS_AS(rmse(a, UvMap(4, 4, 3), full_mask(8, 8)), DimensionError);
}

TEST_CASE("ssim identities and ordering") {
    std::mt19937_64 rng(502);
    const UvMap a = testutil::random_map(rng, 24, 24, 3);
    const FaceMask mask = full_mask(24, 24);

    CHECK(ssim(a, a, mask) == doctest::Approx(1.0).epsilon(1e-9));

    // Constant images have the closed-form score
    // (2*v1*v2 + C1) / (v1^2 + v2^2 + C1).
    const double v1 = 0.3, v2 = 0.7, c1 = 0.01 * 0.01;
    const UvMap u1(24, 24, 1, v1), u2(24, 24, 1, v2);
    const double expect = (2 * v1 * v2 + c1) / (v1 * v1 + v2 * v2 + c1);
    CHECK(std::abs(ssim(u1, u2, mask) - expect) < 1e-6);

    // More distortion scores lower.
    UvMap light = a, heavy = a;
    std::mt19937_64 noise(503);
    for (size_t i = 0; i < a.values.size(); ++i) {
        const double n = testutil::uniform(noise, -1.0, 1.0);
        light.values[i] = clamp01(a.values[i] + 0.02 * n);
        heavy.values[i] = clamp01(a.values[i] + 0.25 * n);
    }
    const double s_light = ssim(a, light, mask);
    const double s_heavy = ssim(a, heavy, mask);
    CHECK(s_light < 1.0);
    CHECK(s_heavy < s_light);

    SUBCASE("image smaller than the window is an error") {
        CHECK_THROWS_AS(ssim(UvMap(8, 8, 1, 0.5), UvMap(8, 8, 1, 0.5), full_mask(8, 8)),
                        DimensionError);
    }
    SUBCASE("mask without interior centers is an error") {
        FaceMask corner(24, 24);
        corner.set(0, 0, true);  // never a valid 11x11 window center
        CHECK_THROWS_AS(ssim(a, a, corner), EmptyMaskError);
    }
}

TEST_CASE("histogram matching distance") {
    std::mt19937_64 rng(504);
    const UvMap a = testutil::random_map(rng, 16, 16, 3);
    const FaceMask mask = full_mask(16, 16);

    SUBCASE("identical distributions give exactly zero") {
        CHECK(hm_distance(a, a, mask) == 0.0);

        // Same multiset in a different spatial arrangement.
        UvMap shuffled = a;
        for (int c = 0; c < 3; ++c) {
            std::vector<size_t> order(a.pixel_count());
            for (size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::shuffle(order.begin(), order.end(), rng);
            for (size_t i = 0; i < order.size(); ++i)
                shuffled.values[3 * i + c] = a.values[3 * order[i] + c];
        }
        CHECK(hm_distance(a, shuffled, mask) == 0.0);
    }
    SUBCASE("constant images: analytic value from the binned CDFs") {
        const UvMap ca(16, 16, 1, 0.2), cb(16, 16, 1, 0.5);
        // 0.2 sits at fraction 0.2 of bin 51, so it matches to
        // (128 + 0.2)/256; squared difference 0.300781..^2.
        const double matched = (128 + 0.2) / 256.0;
        const double expect = (matched - 0.2) * (matched - 0.2);
        CHECK(hm_distance(ca, cb, mask) == doctest::Approx(expect).epsilon(1e-9));
        CHECK(hm_distance(ca, cb, mask) == doctest::Approx(0.09).epsilon(0.01));
    }
    SUBCASE("larger shifts score larger") {
        UvMap near = a, far = a;
        for (double& v : near.values) v = clamp01(v + 0.05);
        for (double& v : far.values) v = clamp01(v + 0.3);
        CHECK(hm_distance(a, near, mask) < hm_distance(a, far, mask));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(hm_distance(a, a, FaceMask(16, 16)), EmptyMaskError);
        CHECK_THROWS_AS(hm_distance(a, UvMap(4, 4, 3), mask), DimensionError);
    }
}

TEST_CASE("dilation") {
    FaceMask dot(9, 9);
    dot.set(4, 4, true);

    SUBCASE("3x3 grows a single pixel into a 3x3 block") {
        const FaceMask grown = dilate(dot, 3, 1);
        for (int y = 0; y < 9; ++y)
            for (int x = 0; x < 9; ++x)
                CHECK(grown.at(x, y) == (std::abs(x - 4) <= 1 && std::abs(y - 4) <= 1));
    }
    SUBCASE("kernel 1 and zero iterations are identities") {
        CHECK(dilate(dot, 1, 5).bits == dot.bits);
        CHECK(dilate(dot, 15, 0).bits == dot.bits);
    }
    SUBCASE("iterating a 15x15 kernel 3 times equals one 43x43 pass") {
        std::mt19937_64 rng(505);
        FaceMask m(96, 96);
        for (size_t i = 0; i < m.bits.size(); ++i) m.bits[i] = (rng() % 50) == 0;
        const FaceMask three = dilate(m, 15, 3);
        const FaceMask once = dilate(m, 43, 1);
        CHECK(three.bits == once.bits);
    }
    SUBCASE("dilation clips at the border") {
        FaceMask edge(5, 5);
        edge.set(0, 0, true);
        const FaceMask grown = dilate(edge, 3, 1);
        CHECK(grown.count_set() == 4);  // quarter of the 3x3 block fits
    }
    SUBCASE("bad arguments") {
        CHECK_THROWS_AS(dilate(dot, 4, 1), InvalidArgumentError);
        CHECK_THROWS_AS(dilate(dot, -3, 1), InvalidArgumentError);
        CHECK_THROWS_AS(dilate(dot, 3, -1), InvalidArgumentError);
    }
}

TEST_CASE("regions from label maps") {
    // 64x64 map: background everywhere except a skin block, one eye pixel,
    // one eyebrow pixel, a lip pixel and an unknown code.
    UvMap labels_map(64, 64, 1, 0.0);
    auto put = [&](int x, int y, int code) {
        labels_map.at(x, y, 0) = code / 255.0;
    };
    for (int y = 10; y < 20; ++y)
        for (int x = 10; x < 20; ++x) put(x, y, 1);  // skin
    put(32, 20, 4);   // eye
    put(32, 14, 2);   // eyebrow
    put(32, 45, 8);   // mouth
    put(5, 5, 200);   // unknown

    size_t unknown = 0;
    const RegionSet regions = regions_from_labels(labels_map, &unknown);
    CHECK(unknown == 1);

    CHECK(regions.face.at(12, 12));
    CHECK(regions.face.at(32, 20));
    CHECK(regions.face.at(32, 45));
    CHECK(!regions.face.at(0, 0));
    CHECK(!regions.face.at(5, 5));  // unknown code is not face

    CHECK(regions.lips.at(32, 45));
    CHECK(!regions.lips.at(32, 20));

    // Eyes are dilated by three 15x15 passes, i.e. a 21-pixel reach.
    CHECK(regions.eyes.at(32, 20));
    CHECK(regions.eyes.at(32 + 21, 20));
    CHECK(!regions.eyes.at(32, 45));
    CHECK(regions.eyes.at(32, 14));  // eyebrow code counts toward eyes

    CHECK_THROWS_AS(regions_from_labels(UvMap(4, 4, 3)), DimensionError);
}
