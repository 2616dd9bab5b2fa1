#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "makeup/errors.hpp"

namespace makeup {

/// A UV-space texture: row-major, channel-interleaved, values nominally in
/// [0,1]. Channel count is 1 (alpha/mask-like), 3 (color) or 4 (color+alpha).
struct UvMap {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<double> values;

    UvMap() = default;
    UvMap(int w, int h, int c, double fill = 0.0)
        : width(w), height(h), channels(c),
          values(static_cast<size_t>(w) * h * c, fill) {}

    double& at(int x, int y, int c) {
        return values[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    double at(int x, int y, int c) const {
        return values[(static_cast<size_t>(y) * width + x) * channels + c];
    }

    size_t pixel_count() const { return static_cast<size_t>(width) * height; }

    bool same_shape(const UvMap& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }
};

/// Makeup layer: 3-channel color bases plus a matching 1-channel alpha matte.
struct MakeupLayer {
    UvMap bases;  // channels == 3
    UvMap alpha;  // channels == 1, values in [0,1]
};

/// Binary per-pixel mask on a texture grid.
struct FaceMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;

    FaceMask() = default;
    FaceMask(int w, int h, bool fill = false)
        : width(w), height(h),
          bits(static_cast<size_t>(w) * h, fill ? 1 : 0) {}

    static FaceMask full(int w, int h) { return FaceMask(w, h, true); }

    bool at(int x, int y) const {
        return bits[static_cast<size_t>(y) * width + x] != 0;
    }
    void set(int x, int y, bool v = true) {
        bits[static_cast<size_t>(y) * width + x] = v ? 1 : 0;
    }
    size_t count_set() const;
};

// ---- PNG I/O -------------------------------------------------------------

/// Load an 8- or 16-bit PNG; integer samples are mapped to [0,1] by dividing
/// by (2^bitdepth - 1). Throws IoError / DecodeError / ChannelMismatchError.
UvMap load_texture(const std::filesystem::path& path, int expected_channels);

/// Save as PNG at the given bit depth; values are clamped to [0,1] and
/// quantized by round(v * (2^bitdepth - 1)).
void save_texture(const UvMap& map, const std::filesystem::path& path,
                  int bitdepth = 8);

/// Load a 1-channel PNG as a mask: nonzero = inside.
FaceMask load_mask(const std::filesystem::path& path);
void save_mask(const FaceMask& mask, const std::filesystem::path& path);

// ---- Compositing ----------------------------------------------------------

/// Alpha-blend a makeup layer over a bare-skin albedo:
/// out = bases * alpha + (1 - alpha) * bare, clamped to [0,1].
UvMap compose_alpha_blend(const MakeupLayer& layer, const UvMap& bare);

/// Visual composite of a layer on its own: bases * alpha per pixel.
UvMap compose_visual(const MakeupLayer& layer);

/// Residual-model composite: clamp(bare + residual, 0, 1). The residual is a
/// 3-channel map in [-1,1].
UvMap compose_residual(const UvMap& bare, const UvMap& residual);

/// Left-right mirror: column x maps to column width-1-x.
UvMap mirror_horizontal(const UvMap& map);

// ---- Vectorization ---------------------------------------------------------

/// Canonical vectorization: row-major pixels, (r, g, b, a) per pixel.
std::vector<double> flatten(const MakeupLayer& layer);
MakeupLayer unflatten(std::span<const double> v, int width, int height);

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace makeup
