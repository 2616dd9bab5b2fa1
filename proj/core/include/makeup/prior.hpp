#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "makeup/uvtex.hpp"

namespace makeup {

/// Linear makeup prior: mean texture plus an orthonormal basis over flattened
/// 4-channel layers, with per-component corpus standard deviations.
///
/// Field values are float32-representable so the on-disk model (little-endian
/// float32) round-trips bit-exactly.
struct PcaPrior {
    int width = 0;
    int height = 0;
    int k = 0;
    Eigen::VectorXd mean;     // length D = width*height*4
    Eigen::MatrixXd basis;    // D x k, orthonormal columns
    Eigen::VectorXd stddevs;  // length k, non-increasing

    Eigen::Index dim() const { return static_cast<Eigen::Index>(width) * height * 4; }
};

struct Coefficients {
    Eigen::VectorXd values;

    static Coefficients zeros(int k) { return {Eigen::VectorXd::Zero(k)}; }
};

/// Build the prior from a corpus of same-sized layers. Keeps at most k
/// components; if the centered corpus has lower rank, k shrinks to the rank.
/// Basis columns are sign-fixed so the largest-magnitude entry is positive.
PcaPrior build_pca(const std::vector<MakeupLayer>& corpus, int k);

/// mean + basis * coeffs, unflattened, all channels clamped to [0,1].
MakeupLayer decode(const PcaPrior& prior, const Coefficients& coeffs);

/// Same without the clamp; used by fitting and linearity tests.
Eigen::VectorXd decode_raw(const PcaPrior& prior, const Coefficients& coeffs);

/// Least-squares coefficients: basis^T (flatten(layer) - mean).
Coefficients project(const PcaPrior& prior, const MakeupLayer& layer);

/// Seeded Gaussian draw, coefficient i ~ N(0, (scale*stddev_i)^2).
Coefficients sample(const PcaPrior& prior, uint64_t seed, double scale);

/// Model directory format: manifest.json + payload.bin (little-endian
/// float32: mean, basis column-major, stddevs), CRC32-checksummed.
void save_model(const PcaPrior& prior, const std::filesystem::path& dir);
PcaPrior load_model(const std::filesystem::path& dir);

}  // namespace makeup
