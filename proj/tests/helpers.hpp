#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "makeup/prior.hpp"
#include "makeup/uvtex.hpp"

namespace testutil {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

inline makeup::UvMap random_map(std::mt19937_64& rng, int w, int h, int c,
                                double lo = 0.0, double hi = 1.0) {
    makeup::UvMap m(w, h, c);
    for (double& v : m.values) v = uniform(rng, lo, hi);
    return m;
}

inline makeup::MakeupLayer random_layer(std::mt19937_64& rng, int w, int h,
                                        double lo = 0.0, double hi = 1.0) {
    return {random_map(rng, w, h, 3, lo, hi), random_map(rng, w, h, 1, lo, hi)};
}

// A corpus of smooth layers whose values stay well inside (0,1), so decoded
// layers at modest coefficients never touch the clamp. Used by gradient and
// linearity tests.
inline std::vector<makeup::MakeupLayer> interior_corpus(int n, int size,
                                                        uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<makeup::MakeupLayer> corpus;
    for (int i = 0; i < n; ++i) {
        makeup::MakeupLayer layer{makeup::UvMap(size, size, 3),
                                  makeup::UvMap(size, size, 1)};
        const double fx = uniform(rng, 0.5, 2.0), fy = uniform(rng, 0.5, 2.0);
        const double phase = uniform(rng, 0.0, 6.28);
        const double base[3] = {uniform(rng, 0.35, 0.65), uniform(rng, 0.35, 0.65),
                                uniform(rng, 0.35, 0.65)};
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x) {
                const double wave =
                    0.12 * std::sin(fx * x * 6.28 / size + phase) *
                    std::cos(fy * y * 6.28 / size);
                for (int c = 0; c < 3; ++c)
                    layer.bases.at(x, y, c) = base[c] + wave * (c + 1) / 3.0;
                layer.alpha.at(x, y, 0) = 0.45 + wave;
            }
        corpus.push_back(std::move(layer));
    }
    return corpus;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("makeup_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testutil
