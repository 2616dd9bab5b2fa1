#include "makeup/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace makeup {

namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;
constexpr int kHistBins = 256;

void require_match(const UvMap& a, const UvMap& b, const FaceMask& mask) {
    if (!a.same_shape(b) || a.width != mask.width || a.height != mask.height)
        throw DimensionError("metric operands have mismatched dimensions");
}

std::array<double, kSsimWindow * kSsimWindow> ssim_kernel() {
    std::array<double, kSsimWindow * kSsimWindow> k{};
    const int r = kSsimWindow / 2;
    double sum = 0.0;
    for (int y = -r; y <= r; ++y)
        for (int x = -r; x <= r; ++x) {
            const double w = std::exp(-(x * x + y * y) / (2.0 * kSsimSigma * kSsimSigma));
            k[(y + r) * kSsimWindow + (x + r)] = w;
            sum += w;
        }
    for (double& w : k) w /= sum;
    return k;
}

}  // namespace

double rmse(const UvMap& a, const UvMap& b, const FaceMask& mask) {
    require_match(a, b, mask);
    double sum = 0.0;
    size_t n = 0;
    for (size_t p = 0; p < mask.bits.size(); ++p) {
        if (!mask.bits[p]) continue;
        for (int c = 0; c < a.channels; ++c) {
            const double d = a.values[p * a.channels + c] - b.values[p * a.channels + c];
            sum += d * d;
        }
        n += a.channels;
    }
    if (n == 0) throw EmptyMaskError("rmse: empty mask");
    return std::sqrt(sum / static_cast<double>(n));
}

double ssim(const UvMap& a, const UvMap& b, const FaceMask& mask) {
    require_match(a, b, mask);
    if (a.width < kSsimWindow || a.height < kSsimWindow)
        throw DimensionError("ssim: image smaller than the 11x11 window");

    static const auto kernel = ssim_kernel();
    const int r = kSsimWindow / 2;

    double total = 0.0;
    size_t windows = 0;
    for (int c = 0; c < a.channels; ++c) {
        for (int y = r; y < a.height - r; ++y) {
            for (int x = r; x < a.width - r; ++x) {
                if (!mask.at(x, y)) continue;
                double mu_a = 0.0, mu_b = 0.0, aa = 0.0, bb = 0.0, ab = 0.0;
                for (int dy = -r; dy <= r; ++dy)
                    for (int dx = -r; dx <= r; ++dx) {
                        const double w = kernel[(dy + r) * kSsimWindow + (dx + r)];
                        const double va = a.at(x + dx, y + dy, c);
                        const double vb = b.at(x + dx, y + dy, c);
                        mu_a += w * va;
                        mu_b += w * vb;
                        aa += w * va * va;
                        bb += w * vb * vb;
                        ab += w * va * vb;
                    }
                const double var_a = aa - mu_a * mu_a;
                const double var_b = bb - mu_b * mu_b;
                const double cov = ab - mu_a * mu_b;
                total += (2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2) /
                         ((mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2));
                ++windows;
            }
        }
    }
    if (windows == 0)
        throw EmptyMaskError("ssim: no masked window centers inside the image");
    return total / static_cast<double>(windows);
}

double hm_distance(const UvMap& a, const UvMap& b, const FaceMask& mask) {
    require_match(a, b, mask);

    // Masked pixel indices once; all channels share them.
    std::vector<size_t> px;
    for (size_t p = 0; p < mask.bits.size(); ++p)
        if (mask.bits[p]) px.push_back(p);
    if (px.empty()) throw EmptyMaskError("hm_distance: empty mask");

    auto bin_of = [](double v) {
        int i = static_cast<int>(clamp01(v) * kHistBins);
        return std::min(i, kHistBins - 1);
    };

    double channel_sum = 0.0;
    for (int c = 0; c < a.channels; ++c) {
        std::array<double, kHistBins> ha{}, hb{};
        for (size_t p : px) {
            ha[bin_of(a.values[p * a.channels + c])] += 1.0;
            hb[bin_of(b.values[p * a.channels + c])] += 1.0;
        }
        // Equal histograms match to the identity map analytically; skip the
        // inversion so the distance is exactly zero.
        if (ha == hb) continue;
        // Counts strictly below each bin.
        std::array<double, kHistBins + 1> ca{}, cb{};
        for (int i = 0; i < kHistBins; ++i) {
            ca[i + 1] = ca[i] + ha[i];
            cb[i + 1] = cb[i] + hb[i];
        }
        const double n = static_cast<double>(px.size());

        double sq = 0.0;
        for (size_t p : px) {
            const double v = clamp01(a.values[p * a.channels + c]);
            const int i = bin_of(v);
            const double frac = std::clamp(v * kHistBins - i, 0.0, 1.0);
            // Rank of v under a's piecewise-linear CDF, in pixel counts.
            const double rank = ca[i] + frac * ha[i];
            // Invert b's CDF: find the bin whose count span contains the rank,
            // interpolating linearly between its edges.
            int j = static_cast<int>(std::upper_bound(cb.begin() + 1, cb.end(), rank) -
                                     (cb.begin() + 1));
            j = std::min(j, kHistBins - 1);
            while (j < kHistBins - 1 && hb[j] == 0.0) ++j;
            while (j > 0 && hb[j] == 0.0) --j;
            double matched;
            if (hb[j] > 0.0) {
                const double t = std::clamp((rank - cb[j]) / hb[j], 0.0, 1.0);
                matched = (j + t) / kHistBins;
            } else {
                matched = (j + 0.5) / kHistBins;  // b has no mass at all
            }
            const double d = v - matched;
            sq += d * d;
        }
        channel_sum += sq / n;
    }
    return channel_sum / a.channels;
}

FaceMask dilate(const FaceMask& mask, int kernel_size, int iterations) {
    if (kernel_size < 1 || kernel_size % 2 == 0)
        throw InvalidArgumentError("dilate: kernel size must be odd and positive");
    if (iterations < 0)
        throw InvalidArgumentError("dilate: iterations must be >= 0");

    const int r = kernel_size / 2;
    FaceMask cur = mask;
    for (int it = 0; it < iterations; ++it) {
        // Square structuring element, applied separably.
        FaceMask horiz(cur.width, cur.height);
        for (int y = 0; y < cur.height; ++y)
            for (int x = 0; x < cur.width; ++x) {
                bool set = false;
                for (int dx = -r; dx <= r && !set; ++dx) {
                    const int xx = x + dx;
                    if (xx >= 0 && xx < cur.width && cur.at(xx, y)) set = true;
                }
                horiz.set(x, y, set);
            }
        FaceMask next(cur.width, cur.height);
        for (int y = 0; y < cur.height; ++y)
            for (int x = 0; x < cur.width; ++x) {
                bool set = false;
                for (int dy = -r; dy <= r && !set; ++dy) {
                    const int yy = y + dy;
                    if (yy >= 0 && yy < cur.height && horiz.at(x, yy)) set = true;
                }
                next.set(x, y, set);
            }
        cur = std::move(next);
    }
    return cur;
}

RegionSet regions_from_labels(const UvMap& label_map, size_t* unknown_pixels) {
    if (label_map.channels != 1)
        throw DimensionError("regions_from_labels: label map must be 1-channel");

    RegionSet regions{FaceMask(label_map.width, label_map.height),
                      FaceMask(label_map.width, label_map.height),
                      FaceMask(label_map.width, label_map.height)};
    size_t unknown = 0;
    for (size_t p = 0; p < label_map.values.size(); ++p) {
        const int code = static_cast<int>(std::lround(label_map.values[p] * 255.0));
        if (code < 0 || code > labels::kMaxCode) {
            ++unknown;
            continue;
        }
        if (code == labels::kBackground) continue;
        regions.face.bits[p] = 1;
        if (code >= 2 && code <= 5) regions.eyes.bits[p] = 1;   // eyes + brows
        if (code >= 7 && code <= 9) regions.lips.bits[p] = 1;   // lips + mouth
    }
    regions.eyes = dilate(regions.eyes, kDefaultDilateKernel, kDefaultDilateIterations);
    if (unknown_pixels) *unknown_pixels = unknown;
    return regions;
}

}  // namespace makeup
