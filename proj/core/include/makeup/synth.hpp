#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "makeup/uvtex.hpp"

namespace makeup {

/// Parametric corpus generator: eyeshadow blobs with smooth falloff, a lip
/// ellipse and optional blush discs over flat skin tones. Deterministic per
/// seed, so desk-scale corpora are reproducible.
struct SyntheticSpec {
    uint64_t seed = 0;
    int count = 10;
    int size = 64;
    // Style knobs.
    int eyeshadow_blobs_min = 2;
    int eyeshadow_blobs_max = 3;
    double eyeshadow_spread = 0.05;   // blob center jitter, fraction of size
    double lip_rx_min = 0.11, lip_rx_max = 0.15;   // lip half-axes, fraction
    double lip_ry_min = 0.045, lip_ry_max = 0.065;
    double blush_probability = 0.4;
};

struct SyntheticSample {
    MakeupLayer layer;
    UvMap bare;   // 3-channel skin albedo
};

/// In-memory generation of sample `index` of the corpus described by `spec`.
SyntheticSample gen_sample(const SyntheticSpec& spec, int index);

/// Elliptical face-region mask shared by the whole corpus.
FaceMask gen_face_mask(int size);

struct SyntheticManifest {
    std::vector<std::string> bases_files;
    std::vector<std::string> alpha_files;
    std::vector<std::string> bare_files;
    std::string mask_file;
};

/// Write the corpus to out_dir as makeup_NNN_bases.png / makeup_NNN_alpha.png
/// / bare_NNN.png plus face_mask.png. 16-bit PNGs so fitting targets are not
/// quantization-limited.
SyntheticManifest gen_synthetic(const SyntheticSpec& spec,
                                const std::filesystem::path& out_dir);

/// Load a corpus previously written by gen_synthetic.
std::vector<MakeupLayer> load_corpus(const std::filesystem::path& dir);

}  // namespace makeup
