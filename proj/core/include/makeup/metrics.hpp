#pragma once

#include "makeup/uvtex.hpp"

namespace makeup {

/// Region masks used by the evaluation protocol. Eyes are pre-dilated so
/// eyeshadow around the eye codes is covered.
struct RegionSet {
    FaceMask face;
    FaceMask eyes;
    FaceMask lips;
};

/// Label codes for segmentation maps (8-bit single-channel PNG):
/// 0 background, 1 skin, 2/3 eyebrows, 4/5 eyes, 6 nose, 7/8/9 lips-and-mouth.
namespace labels {
inline constexpr int kBackground = 0;
inline constexpr int kSkin = 1;
inline constexpr int kMaxCode = 9;
}  // namespace labels

/// sqrt(mean over masked pixels and channels of (a-b)^2).
double rmse(const UvMap& a, const UvMap& b, const FaceMask& mask);

/// Mean-over-channels windowed SSIM (11x11 Gaussian window, sigma 1.5,
/// C1=0.01^2, C2=0.03^2 at dynamic range 1), averaged over fully-interior
/// windows whose center pixel is masked.
double ssim(const UvMap& a, const UvMap& b, const FaceMask& mask);

/// Histogram-matching distance: per channel, match a's masked pixels to b's
/// masked distribution (256-bin CDF matching, linear interpolation between
/// bin edges) and return the mean squared difference between a and its
/// matched version, averaged over channels.
double hm_distance(const UvMap& a, const UvMap& b, const FaceMask& mask);

/// Binary dilation with a square structuring element, repeated `iterations`
/// times. Outside the grid counts as empty.
FaceMask dilate(const FaceMask& mask, int kernel_size, int iterations);

inline constexpr int kDefaultDilateKernel = 15;
inline constexpr int kDefaultDilateIterations = 3;

/// Build face/eyes/lips masks from an integer-coded label map (values are
/// code/255 as loaded from 8-bit PNG). Unknown codes are counted and ignored;
/// the count is written to *unknown_pixels when non-null.
RegionSet regions_from_labels(const UvMap& label_map,
                              size_t* unknown_pixels = nullptr);

}  // namespace makeup
