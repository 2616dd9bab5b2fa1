#include "makeup/prior.hpp"

#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "nlohmann/json.hpp"

namespace makeup {

namespace {

constexpr int kFormatVersion = 1;

// Round every stored value to float32 so the on-disk float payload is a
// lossless image of the in-memory model.
void quantize_to_float(PcaPrior& p) {
    auto q = [](double v) { return static_cast<double>(static_cast<float>(v)); };
    for (Eigen::Index i = 0; i < p.mean.size(); ++i) p.mean[i] = q(p.mean[i]);
    for (Eigen::Index i = 0; i < p.basis.size(); ++i)
        p.basis.data()[i] = q(p.basis.data()[i]);
    for (Eigen::Index i = 0; i < p.stddevs.size(); ++i)
        p.stddevs[i] = q(p.stddevs[i]);
}

uint32_t crc32_update(uint32_t crc, const uint8_t* data, size_t len) {
    static const auto table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int j = 0; j < 8; ++j)
                c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    crc = ~crc;
    for (size_t i = 0; i < len; ++i)
        crc = table[(crc ^ data[i]) & 0xffu] ^ (crc >> 8);
    return ~crc;
}

}  // namespace

PcaPrior build_pca(const std::vector<MakeupLayer>& corpus, int k) {
    if (corpus.empty()) throw InvalidArgumentError("build_pca: empty corpus");
    if (k < 1) throw InvalidArgumentError("build_pca: k must be >= 1");

    const int w = corpus.front().bases.width;
    const int h = corpus.front().bases.height;
    const Eigen::Index n = static_cast<Eigen::Index>(corpus.size());
    const Eigen::Index d = static_cast<Eigen::Index>(w) * h * 4;

    Eigen::MatrixXd data(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& layer = corpus[i];
        if (layer.bases.width != w || layer.bases.height != h)
            throw DimensionError("build_pca: corpus sample dimensions differ");
        const std::vector<double> v = flatten(layer);
        data.row(i) = Eigen::Map<const Eigen::VectorXd>(v.data(), d);
    }

    PcaPrior prior;
    prior.width = w;
    prior.height = h;
    prior.mean = data.colwise().mean();
    data.rowwise() -= prior.mean.transpose();

    Eigen::BDCSVD<Eigen::MatrixXd> svd(data,
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();

    // Numerical rank: drop directions whose singular value is negligible
    // relative to the largest, with an absolute floor at the rounding noise of
    // the mean subtraction so a constant corpus has rank zero.
    const double noise_floor = 16.0 * std::numeric_limits<double>::epsilon() *
                               std::sqrt(static_cast<double>(n) * d) *
                               (prior.mean.cwiseAbs().maxCoeff() + 1.0);
    const double tol =
        sv.size() > 0 ? std::max(noise_floor,
                                 sv[0] * static_cast<double>(std::max(n, d)) *
                                     std::numeric_limits<double>::epsilon())
                      : 0.0;
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > tol && sv[rank] > 0.0) ++rank;

    const Eigen::Index kept = std::min<Eigen::Index>(k, rank);
    prior.k = static_cast<int>(kept);
    prior.basis = svd.matrixV().leftCols(kept);
    prior.stddevs = n > 1 ? Eigen::VectorXd(sv.head(kept) / std::sqrt(double(n - 1)))
                          : Eigen::VectorXd::Zero(kept);

    // Fix the SVD sign indeterminacy: largest-magnitude entry of each column
    // positive, lowest index winning ties.
    for (Eigen::Index j = 0; j < kept; ++j) {
        Eigen::Index best = 0;
        double mag = -1.0;
        for (Eigen::Index i = 0; i < d; ++i) {
            const double m = std::abs(prior.basis(i, j));
            if (m > mag) {
                mag = m;
                best = i;
            }
        }
        if (prior.basis(best, j) < 0.0) prior.basis.col(j) = -prior.basis.col(j);
    }

    quantize_to_float(prior);
    return prior;
}

Eigen::VectorXd decode_raw(const PcaPrior& prior, const Coefficients& coeffs) {
    if (coeffs.values.size() != prior.k)
        throw DimensionError("decode: coefficient length " +
                             std::to_string(coeffs.values.size()) +
                             " != model k " + std::to_string(prior.k));
    return prior.mean + prior.basis * coeffs.values;
}

MakeupLayer decode(const PcaPrior& prior, const Coefficients& coeffs) {
    Eigen::VectorXd v = decode_raw(prior, coeffs);
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = clamp01(v[i]);
    return unflatten(std::span<const double>(v.data(), v.size()), prior.width,
                     prior.height);
}

Coefficients project(const PcaPrior& prior, const MakeupLayer& layer) {
    if (layer.bases.width != prior.width || layer.bases.height != prior.height)
        throw DimensionError("project: layer dimensions do not match model");
    const std::vector<double> v = flatten(layer);
    Eigen::Map<const Eigen::VectorXd> x(v.data(), prior.dim());
    return {prior.basis.transpose() * (x - prior.mean)};
}

Coefficients sample(const PcaPrior& prior, uint64_t seed, double scale) {
    if (scale < 0.0) throw InvalidArgumentError("sample: scale must be >= 0");
    std::mt19937_64 rng(seed);
    // Hand-rolled Box-Muller; std::normal_distribution output is not pinned
    // across standard library versions.
    auto uniform = [&rng]() {
        return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    };
    Eigen::VectorXd v(prior.k);
    for (int i = 0; i < prior.k; ++i) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double z = std::sqrt(-2.0 * std::log(u1)) *
                         std::cos(2.0 * M_PI * u2);
        v[i] = z * scale * prior.stddevs[i];
    }
    return {v};
}

void save_model(const PcaPrior& prior, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const Eigen::Index d = prior.dim();

    std::vector<float> payload;
    payload.reserve(d + d * prior.k + prior.k);
    for (Eigen::Index i = 0; i < d; ++i)
        payload.push_back(static_cast<float>(prior.mean[i]));
    for (int j = 0; j < prior.k; ++j)
        for (Eigen::Index i = 0; i < d; ++i)
            payload.push_back(static_cast<float>(prior.basis(i, j)));
    for (int j = 0; j < prior.k; ++j)
        payload.push_back(static_cast<float>(prior.stddevs[j]));

    const size_t bytes = payload.size() * sizeof(float);
    const uint32_t crc = crc32_update(
        0, reinterpret_cast<const uint8_t*>(payload.data()), bytes);

    nlohmann::json manifest = {
        {"format_version", kFormatVersion},
        {"width", prior.width},
        {"height", prior.height},
        {"k", prior.k},
        {"payload_bytes", bytes},
        {"payload_crc32", crc},
    };

    std::ofstream bin(dir / "payload.bin", std::ios::binary);
    if (!bin) throw IoError("cannot write " + (dir / "payload.bin").string());
    bin.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(bytes));
    if (!bin) throw IoError("short write to " + (dir / "payload.bin").string());
    bin.close();

    std::ofstream mf(dir / "manifest.json");
    if (!mf) throw IoError("cannot write " + (dir / "manifest.json").string());
    mf << manifest.dump(2) << "\n";
}

PcaPrior load_model(const std::filesystem::path& dir) {
    std::ifstream mf(dir / "manifest.json");
    if (!mf) throw IoError("cannot open " + (dir / "manifest.json").string());
    nlohmann::json manifest;
    try {
        mf >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw ManifestError("corrupt manifest in " + dir.string() + ": " +
                            e.what());
    }

    PcaPrior prior;
    size_t expected_bytes = 0;
    uint32_t expected_crc = 0;
    try {
        if (manifest.at("format_version").get<int>() != kFormatVersion)
            throw ManifestError("unsupported model format_version");
        prior.width = manifest.at("width").get<int>();
        prior.height = manifest.at("height").get<int>();
        prior.k = manifest.at("k").get<int>();
        expected_bytes = manifest.at("payload_bytes").get<size_t>();
        expected_crc = manifest.at("payload_crc32").get<uint32_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ManifestError("corrupt manifest in " + dir.string() + ": " +
                            e.what());
    }
    if (prior.width <= 0 || prior.height <= 0 || prior.k < 0)
        throw ManifestError("corrupt manifest: non-positive dimensions");

    const Eigen::Index d = prior.dim();
    const size_t count = static_cast<size_t>(d) + static_cast<size_t>(d) * prior.k +
                         static_cast<size_t>(prior.k);
    if (expected_bytes != count * sizeof(float)) {
        throw SizeMismatchError(
            "manifest payload_bytes " + std::to_string(expected_bytes) +
            " inconsistent with k=" + std::to_string(prior.k) + " (expected " +
            std::to_string(count * sizeof(float)) + " bytes)");
    }

    std::ifstream bin(dir / "payload.bin", std::ios::binary);
    if (!bin) throw IoError("cannot open " + (dir / "payload.bin").string());
    std::vector<float> payload(count);
    bin.read(reinterpret_cast<char*>(payload.data()),
             static_cast<std::streamsize>(expected_bytes));
    if (static_cast<size_t>(bin.gcount()) != expected_bytes || bin.peek() != EOF) {
        throw SizeMismatchError(
            "payload.bin size does not match manifest payload_bytes " +
            std::to_string(expected_bytes));
    }
    const uint32_t crc = crc32_update(
        0, reinterpret_cast<const uint8_t*>(payload.data()), expected_bytes);
    if (crc != expected_crc)
        throw ChecksumError("payload checksum mismatch in " + dir.string());

    size_t i = 0;
    prior.mean.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) prior.mean[j] = payload[i++];
    prior.basis.resize(d, prior.k);
    for (int c = 0; c < prior.k; ++c)
        for (Eigen::Index j = 0; j < d; ++j) prior.basis(j, c) = payload[i++];
    prior.stddevs.resize(prior.k);
    for (int c = 0; c < prior.k; ++c) prior.stddevs[c] = payload[i++];
    return prior;
}

}  // namespace makeup
