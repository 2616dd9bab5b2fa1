#include "makeup/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>

namespace makeup {

namespace {

// Skin green/blue are held fixed across the corpus and makeup colors sit at a
// fixed +0.5 blue contrast over the skin, so composited targets can be
// un-blended channel-wise when estimating coefficients.
constexpr double kSkinGreen = 0.47;
constexpr double kSkinBlue = 0.36;
constexpr double kMakeupBlue = kSkinBlue + 0.5;
constexpr double kAlphaFloor = 0.12;
constexpr double kAlphaCeil = 0.92;

// One RNG stream per sample so corpus entries are independent of count.
std::mt19937_64 sample_rng(uint64_t seed, int index) {
    return std::mt19937_64(seed * 0x9E3779B97F4A7C15ULL +
                           0xD1B54A32D192ED03ULL * (index + 1));
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

// Sharp-edged blob profile; near-zero beyond ~1.3 sigma.
double blob_falloff(double r2, double sigma) {
    const double t = r2 / (sigma * sigma);
    return std::exp(-t * t);
}

struct Blob {
    double cx, cy, sigma, amp;
};

struct Zone {
    double cx, cy, rx, ry;
    bool contains(double x, double y) const {
        const double dx = (x - cx) / rx, dy = (y - cy) / ry;
        return dx * dx + dy * dy <= 1.0;
    }
};

}  // namespace

FaceMask gen_face_mask(int size) {
    FaceMask mask(size, size);
    const Zone face{0.5 * size, 0.52 * size, 0.42 * size, 0.46 * size};
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) mask.set(x, y, face.contains(x, y));
    return mask;
}

SyntheticSample gen_sample(const SyntheticSpec& spec, int index) {
    if (spec.count < 1 || spec.size < 32)
        throw InvalidArgumentError("synthetic spec: count >= 1 and size >= 32");
    const int s = spec.size;
    std::mt19937_64 rng = sample_rng(spec.seed, index);

    const double tone = uniform(rng, 0.58, 0.72);
    const std::array<double, 3> skin = {tone, kSkinGreen, kSkinBlue};

    // Fixed makeup zones; style variation lives inside them.
    const Zone eye_l{0.34 * s, 0.40 * s, 0.14 * s, 0.10 * s};
    const Zone eye_r{0.66 * s, 0.40 * s, 0.14 * s, 0.10 * s};
    const Zone lip{0.50 * s, 0.70 * s, 0.17 * s, 0.09 * s};
    const Zone blush_l{0.28 * s, 0.58 * s, 0.08 * s, 0.08 * s};
    const Zone blush_r{0.72 * s, 0.58 * s, 0.08 * s, 0.08 * s};

    // Eyeshadow blobs, mirrored across both eyes.
    const int nblobs = spec.eyeshadow_blobs_min +
                       static_cast<int>(rng() % (spec.eyeshadow_blobs_max -
                                                 spec.eyeshadow_blobs_min + 1));
    std::vector<Blob> eye_blobs;
    for (int i = 0; i < nblobs; ++i) {
        const double jx = uniform(rng, -spec.eyeshadow_spread, spec.eyeshadow_spread) * s;
        const double jy = uniform(rng, -spec.eyeshadow_spread, spec.eyeshadow_spread) * s;
        const double sigma = uniform(rng, 0.05, 0.08) * s;
        const double amp = uniform(rng, 0.35, 0.70);
        eye_blobs.push_back({eye_l.cx + jx, eye_l.cy + jy, sigma, amp});
        eye_blobs.push_back({eye_r.cx - jx, eye_r.cy + jy, sigma, amp});
    }

    // Zone colors: red/green drift around the skin tone, blue pinned at the
    // +0.5 contrast. Blush keeps one fixed color; only its opacity varies.
    const std::array<double, 3> eye_color = {
        std::clamp(tone + uniform(rng, -0.28, 0.28), 0.30, 0.95),
        std::clamp(kSkinGreen + uniform(rng, -0.28, 0.28), 0.20, 0.75),
        kMakeupBlue};
    const std::array<double, 3> lip_color = {
        std::clamp(tone + uniform(rng, 0.0, 0.26), 0.30, 0.95),
        std::clamp(kSkinGreen + uniform(rng, -0.28, -0.05), 0.20, 0.75),
        kMakeupBlue};
    const std::array<double, 3> blush_color = {0.78, 0.40, kMakeupBlue};

    // Lip alpha pattern: an inner ellipse with sampled radii.
    const double lip_rx = uniform(rng, spec.lip_rx_min, spec.lip_rx_max) * s;
    const double lip_ry = uniform(rng, spec.lip_ry_min, spec.lip_ry_max) * s;
    const double lip_amp = uniform(rng, 0.40, 0.75);
    const double blush_amp =
        uniform(rng, 0.0, 1.0) < spec.blush_probability ? uniform(rng, 0.20, 0.40)
                                                        : 0.0;
    const double blush_sigma = uniform(rng, 0.05, 0.07) * s;

    SyntheticSample out;
    out.bare = UvMap(s, s, 3);
    out.layer.bases = UvMap(s, s, 3);
    out.layer.alpha = UvMap(s, s, 1);

    for (int y = 0; y < s; ++y) {
        for (int x = 0; x < s; ++x) {
            for (int c = 0; c < 3; ++c) out.bare.at(x, y, c) = skin[c];

            const bool in_eye = eye_l.contains(x, y) || eye_r.contains(x, y);
            const bool in_lip = lip.contains(x, y);
            const bool in_blush = blush_l.contains(x, y) || blush_r.contains(x, y);
            if (!in_eye && !in_lip && !in_blush) continue;

            double alpha = kAlphaFloor;
            const std::array<double, 3>* color = nullptr;
            if (in_eye) {
                for (const Blob& b : eye_blobs) {
                    const double dx = x - b.cx, dy = y - b.cy;
                    alpha += b.amp * blob_falloff(dx * dx + dy * dy, b.sigma);
                }
                color = &eye_color;
            } else if (in_lip) {
                const double u = (x - lip.cx) * (x - lip.cx) / (lip_rx * lip_rx) +
                                 (y - lip.cy) * (y - lip.cy) / (lip_ry * lip_ry);
                alpha += lip_amp * std::clamp((1.2 - u) / 0.4, 0.0, 1.0);
                color = &lip_color;
            } else {
                for (const Zone* z : {&blush_l, &blush_r}) {
                    const double dx = x - z->cx, dy = y - z->cy;
                    alpha += blush_amp * blob_falloff(dx * dx + dy * dy, blush_sigma);
                }
                color = &blush_color;
            }
            out.layer.alpha.at(x, y, 0) = std::min(alpha, kAlphaCeil);
            for (int c = 0; c < 3; ++c) out.layer.bases.at(x, y, c) = (*color)[c];
        }
    }
    return out;
}

SyntheticManifest gen_synthetic(const SyntheticSpec& spec,
                                const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create directory " + out_dir.string());

    SyntheticManifest manifest;
    char name[64];
    for (int i = 0; i < spec.count; ++i) {
        const SyntheticSample sample = gen_sample(spec, i);
        std::snprintf(name, sizeof(name), "makeup_%03d_bases.png", i);
        save_texture(sample.layer.bases, out_dir / name, 16);
        manifest.bases_files.push_back(name);
        std::snprintf(name, sizeof(name), "makeup_%03d_alpha.png", i);
        save_texture(sample.layer.alpha, out_dir / name, 16);
        manifest.alpha_files.push_back(name);
        std::snprintf(name, sizeof(name), "bare_%03d.png", i);
        save_texture(sample.bare, out_dir / name, 16);
        manifest.bare_files.push_back(name);
    }
    save_mask(gen_face_mask(spec.size), out_dir / "face_mask.png");
    manifest.mask_file = "face_mask.png";
    return manifest;
}

std::vector<MakeupLayer> load_corpus(const std::filesystem::path& dir) {
    std::vector<MakeupLayer> corpus;
    for (int i = 0;; ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "makeup_%03d_bases.png", i);
        const auto bases_path = dir / name;
        if (!std::filesystem::exists(bases_path)) break;
        std::snprintf(name, sizeof(name), "makeup_%03d_alpha.png", i);
        corpus.push_back({load_texture(bases_path, 3), load_texture(dir / name, 1)});
    }
    if (corpus.empty())
        throw IoError("no makeup_NNN_bases.png layers found in " + dir.string());
    return corpus;
}

}  // namespace makeup
