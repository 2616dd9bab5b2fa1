#include "makeup/uvtex.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>

namespace makeup {

size_t FaceMask::count_set() const {
    size_t n = 0;
    for (uint8_t b : bits) n += (b != 0);
    return n;
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

int png_color_type_for(int channels) {
    switch (channels) {
        case 1: return PNG_COLOR_TYPE_GRAY;
        case 3: return PNG_COLOR_TYPE_RGB;
        case 4: return PNG_COLOR_TYPE_RGB_ALPHA;
        default:
            throw InvalidArgumentError("unsupported channel count " +
                                       std::to_string(channels));
    }
}

}  // namespace

UvMap load_texture(const std::filesystem::path& path, int expected_channels) {
    if (expected_channels != 1 && expected_channels != 3 &&
        expected_channels != 4) {
        throw InvalidArgumentError("expected_channels must be 1, 3 or 4");
    }
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw IoError("cannot open file: " + path.string());

    png_byte header[8];
    if (std::fread(header, 1, 8, fp.get()) != 8 ||
        png_sig_cmp(header, 0, 8) != 0) {
        throw DecodeError("not a PNG file: " + path.string());
    }

    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError("libpng initialization failed");
    }
    std::vector<png_bytep> row_ptrs;
    std::vector<png_byte> raw;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError("undecodable PNG: " + path.string());
    }
    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    // Normalize palette/low-depth grayscale to full-depth samples.
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_read_update_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const int channels = png_get_channels(png, info);
    const int bitdepth = png_get_bit_depth(png, info);

    if (channels != expected_channels) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ChannelMismatchError(
            "channel mismatch in " + path.string() + ": expected " +
            std::to_string(expected_channels) + ", got " +
            std::to_string(channels));
    }

    const size_t rowbytes = png_get_rowbytes(png, info);
    raw.resize(rowbytes * height);
    row_ptrs.resize(height);
    for (int y = 0; y < height; ++y) row_ptrs[y] = raw.data() + rowbytes * y;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    UvMap out(width, height, channels);
    const double scale = 1.0 / ((1u << bitdepth) - 1u);
    size_t i = 0;
    for (int y = 0; y < height; ++y) {
        const png_byte* row = raw.data() + rowbytes * y;
        for (int x = 0; x < width * channels; ++x) {
            if (bitdepth == 16) {
                // PNG stores 16-bit samples big-endian.
                unsigned v = (static_cast<unsigned>(row[2 * x]) << 8) | row[2 * x + 1];
                out.values[i++] = v * scale;
            } else {
                out.values[i++] = row[x] * scale;
            }
        }
    }
    return out;
}

void save_texture(const UvMap& map, const std::filesystem::path& path,
                  int bitdepth) {
    if (bitdepth != 8 && bitdepth != 16)
        throw InvalidArgumentError("bitdepth must be 8 or 16");
    const int color_type = png_color_type_for(map.channels);

    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw IoError("cannot write file: " + path.string());

    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG write failed: " + path.string());
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, map.width, map.height, bitdepth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const double maxval = (1u << bitdepth) - 1u;
    const size_t rowsamples = static_cast<size_t>(map.width) * map.channels;
    std::vector<png_byte> row(rowsamples * (bitdepth / 8));
    for (int y = 0; y < map.height; ++y) {
        for (size_t x = 0; x < rowsamples; ++x) {
            double v = clamp01(map.values[rowsamples * y + x]);
            unsigned q = static_cast<unsigned>(std::lround(v * maxval));
            if (bitdepth == 16) {
                row[2 * x] = static_cast<png_byte>(q >> 8);
                row[2 * x + 1] = static_cast<png_byte>(q & 0xff);
            } else {
                row[x] = static_cast<png_byte>(q);
            }
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

FaceMask load_mask(const std::filesystem::path& path) {
    UvMap m = load_texture(path, 1);
    FaceMask mask(m.width, m.height);
    for (size_t i = 0; i < m.values.size(); ++i) mask.bits[i] = m.values[i] > 0.0;
    return mask;
}

void save_mask(const FaceMask& mask, const std::filesystem::path& path) {
    UvMap m(mask.width, mask.height, 1);
    for (size_t i = 0; i < m.values.size(); ++i) m.values[i] = mask.bits[i] ? 1.0 : 0.0;
    save_texture(m, path, 8);
}

namespace {

void require_layer(const MakeupLayer& layer) {
    if (layer.bases.channels != 3 || layer.alpha.channels != 1 ||
        layer.bases.width != layer.alpha.width ||
        layer.bases.height != layer.alpha.height) {
        throw DimensionError("invalid makeup layer: bases must be 3-channel and "
                             "alpha a matching 1-channel map");
    }
}

}  // namespace

UvMap compose_alpha_blend(const MakeupLayer& layer, const UvMap& bare) {
    require_layer(layer);
    if (bare.channels != 3 || bare.width != layer.bases.width ||
        bare.height != layer.bases.height) {
        throw DimensionError("bare albedo does not match layer dimensions");
    }
    UvMap out(bare.width, bare.height, 3);
    const size_t n = out.pixel_count();
    for (size_t p = 0; p < n; ++p) {
        const double a = layer.alpha.values[p];
        for (int c = 0; c < 3; ++c) {
            const double v =
                layer.bases.values[3 * p + c] * a + (1.0 - a) * bare.values[3 * p + c];
            out.values[3 * p + c] = clamp01(v);
        }
    }
    return out;
}

UvMap compose_visual(const MakeupLayer& layer) {
    require_layer(layer);
    UvMap out(layer.bases.width, layer.bases.height, 3);
    const size_t n = out.pixel_count();
    for (size_t p = 0; p < n; ++p) {
        const double a = layer.alpha.values[p];
        for (int c = 0; c < 3; ++c)
            out.values[3 * p + c] = layer.bases.values[3 * p + c] * a;
    }
    return out;
}

UvMap compose_residual(const UvMap& bare, const UvMap& residual) {
    if (!bare.same_shape(residual) || bare.channels != 3)
        throw DimensionError("residual composite needs matching 3-channel maps");
    UvMap out(bare.width, bare.height, 3);
    for (size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = clamp01(bare.values[i] + residual.values[i]);
    return out;
}

UvMap mirror_horizontal(const UvMap& map) {
    UvMap out(map.width, map.height, map.channels);
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x)
            for (int c = 0; c < map.channels; ++c)
                out.at(x, y, c) = map.at(map.width - 1 - x, y, c);
    return out;
}

std::vector<double> flatten(const MakeupLayer& layer) {
    require_layer(layer);
    const size_t n = layer.alpha.pixel_count();
    std::vector<double> v(n * 4);
    for (size_t p = 0; p < n; ++p) {
        v[4 * p + 0] = layer.bases.values[3 * p + 0];
        v[4 * p + 1] = layer.bases.values[3 * p + 1];
        v[4 * p + 2] = layer.bases.values[3 * p + 2];
        v[4 * p + 3] = layer.alpha.values[p];
    }
    return v;
}

MakeupLayer unflatten(std::span<const double> v, int width, int height) {
    const size_t n = static_cast<size_t>(width) * height;
    if (v.size() != n * 4) {
        throw DimensionError("unflatten: vector length " +
                             std::to_string(v.size()) + " != " +
                             std::to_string(n * 4));
    }
    MakeupLayer layer{UvMap(width, height, 3), UvMap(width, height, 1)};
    for (size_t p = 0; p < n; ++p) {
        layer.bases.values[3 * p + 0] = v[4 * p + 0];
        layer.bases.values[3 * p + 1] = v[4 * p + 1];
        layer.bases.values[3 * p + 2] = v[4 * p + 2];
        layer.alpha.values[p] = v[4 * p + 3];
    }
    return layer;
}

}  // namespace makeup
