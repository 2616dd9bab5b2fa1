// Command-line front end for the makeup prior toolkit.
//
// Subcommands: gen-synthetic, build-prior, fit, decode, sample, transfer,
// interpolate, eval. Exit codes: 0 success, 2 usage error, 1 runtime error
// (with a one-line "error: <class>: <message>" on stderr).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "makeup/apps.hpp"
#include "makeup/fit.hpp"
#include "makeup/metrics.hpp"
#include "makeup/prior.hpp"
#include "makeup/synth.hpp"
#include "makeup/uvtex.hpp"
#include "nlohmann/json.hpp"

namespace {

using makeup::Coefficients;
using nlohmann::json;

Coefficients read_coeffs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw makeup::IoError("cannot open coefficients file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw makeup::InvalidArgumentError("bad coefficients JSON in " + path +
                                           ": " + e.what());
    }
    const auto values = j.at("values").get<std::vector<double>>();
    const auto k = j.at("k").get<size_t>();
    if (k != values.size())
        throw makeup::InvalidArgumentError(
            "coefficients JSON: k does not match values length in " + path);
    Coefficients c;
    c.values = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                 static_cast<Eigen::Index>(k));
    return c;
}

void write_coeffs(const Coefficients& c, const std::string& path) {
    json j = {{"k", c.values.size()},
              {"values", std::vector<double>(c.values.data(),
                                             c.values.data() + c.values.size())}};
    std::ofstream out(path);
    if (!out) throw makeup::IoError("cannot write coefficients file: " + path);
    out << j.dump(2) << "\n";
}

makeup::FitConfig read_fit_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw makeup::IoError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return makeup::fit_config_from_json(ss.str());
}

void write_history_csv(const std::vector<makeup::LossBreakdown>& history,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw makeup::IoError("cannot write history file: " + path);
    out << "iteration,pho,reg,sym,alpha,total\n";
    out.precision(17);
    for (size_t i = 0; i < history.size(); ++i) {
        const auto& h = history[i];
        out << i << ',' << h.pho << ',' << h.reg << ',' << h.sym << ','
            << h.alpha << ',' << h.total << "\n";
    }
}

void save_layer(const makeup::MakeupLayer& layer, const std::string& prefix,
                int bitdepth) {
    makeup::save_texture(layer.bases, prefix + "_bases.png", bitdepth);
    makeup::save_texture(layer.alpha, prefix + "_alpha.png", bitdepth);
    makeup::save_texture(makeup::compose_visual(layer), prefix + "_visual.png",
                         bitdepth);
}

std::vector<uint8_t> parse_mix_mask(const std::string& text) {
    std::vector<uint8_t> mask;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "0") mask.push_back(0);
        else if (item == "1") mask.push_back(1);
        else
            throw makeup::InvalidArgumentError(
                "mix mask must be comma-separated 0/1 values");
    }
    if (mask.empty())
        throw makeup::InvalidArgumentError("mix mask is empty");
    return mask;
}

int run(int argc, char** argv) {
    CLI::App app{"PCA makeup prior toolkit: build priors over 4-channel UV "
                 "makeup textures, fit coefficients to makeup-applied albedos, "
                 "and run transfer/interpolation/evaluation"};
    app.require_subcommand(1);

    // gen-synthetic
    auto* gen = app.add_subcommand("gen-synthetic",
                                   "Generate a deterministic synthetic corpus");
    std::string gen_out;
    makeup::SyntheticSpec spec;
    gen->add_option("--out", gen_out, "Output directory")->required();
    gen->add_option("--seed", spec.seed, "RNG seed")->required();
    gen->add_option("--count", spec.count, "Number of samples");
    gen->add_option("--size", spec.size, "Texture size in pixels (square)");

    // build-prior
    auto* build = app.add_subcommand("build-prior",
                                     "Build a PCA prior from a corpus directory");
    std::string build_in, build_out;
    int build_k = 100;
    build->add_option("--in", build_in, "Corpus directory")->required();
    build->add_option("--k", build_k, "Component count");
    build->add_option("--out", build_out, "Model output directory")->required();

    // fit
    auto* fit = app.add_subcommand("fit", "Estimate makeup coefficients");
    std::string fit_model, fit_bare, fit_target, fit_mask, fit_config, fit_out,
        fit_history, fit_init;
    int fit_iters = -1;
    fit->add_option("--model", fit_model, "Model directory")->required();
    fit->add_option("--bare", fit_bare, "Bare-skin albedo PNG")->required();
    fit->add_option("--target", fit_target, "Makeup-applied target PNG")->required();
    fit->add_option("--mask", fit_mask, "Face mask PNG")->required();
    fit->add_option("--config", fit_config, "FitConfig JSON file");
    fit->add_option("--out", fit_out, "Output coefficients JSON")->required();
    fit->add_option("--history", fit_history,
                    "Loss-history CSV (default: <out>.history.csv)");
    fit->add_option("--init", fit_init,
                    "Initial coefficients JSON (default: warm start)");
    fit->add_option("--iters", fit_iters, "Override iteration count");

    // decode
    auto* dec = app.add_subcommand("decode", "Decode coefficients to a layer");
    std::string dec_model, dec_coeffs, dec_out;
    int dec_bitdepth = 16;
    dec->add_option("--model", dec_model, "Model directory")->required();
    dec->add_option("--coeffs", dec_coeffs, "Coefficients JSON")->required();
    dec->add_option("--out", dec_out, "Output prefix")->required();
    dec->add_option("--bitdepth", dec_bitdepth, "PNG bit depth (8 or 16)");

    // sample
    auto* smp = app.add_subcommand("sample", "Draw random coefficients");
    std::string smp_model, smp_out;
    uint64_t smp_seed = 0;
    double smp_scale = 1.0;
    smp->add_option("--model", smp_model, "Model directory")->required();
    smp->add_option("--seed", smp_seed, "RNG seed")->required();
    smp->add_option("--scale", smp_scale, "Stddev scale");
    smp->add_option("--out", smp_out, "Output coefficients JSON")->required();

    // transfer
    auto* trf = app.add_subcommand("transfer", "Apply a style to a bare face");
    std::string trf_model, trf_coeffs, trf_bare, trf_out;
    int trf_bitdepth = 16;
    trf->add_option("--model", trf_model, "Model directory")->required();
    trf->add_option("--coeffs", trf_coeffs, "Coefficients JSON")->required();
    trf->add_option("--bare", trf_bare, "Bare-skin albedo PNG")->required();
    trf->add_option("--out", trf_out, "Output PNG")->required();
    trf->add_option("--bitdepth", trf_bitdepth, "PNG bit depth (8 or 16)");

    // interpolate
    auto* itp = app.add_subcommand("interpolate",
                                   "Blend styles (coeff | mix | bilerp | fade)");
    std::string itp_mode, itp_a, itp_b, itp_c, itp_d, itp_mix, itp_bases,
        itp_alpha, itp_out;
    double itp_t = 0.5, itp_u = 0.5, itp_v = 0.5;
    int itp_bitdepth = 16;
    itp->add_option("--mode", itp_mode, "coeff | mix | bilerp | fade")->required();
    itp->add_option("--a", itp_a, "Coefficients JSON A (c00 for bilerp)");
    itp->add_option("--b", itp_b, "Coefficients JSON B (c01 for bilerp)");
    itp->add_option("--c", itp_c, "Coefficients JSON c10 (bilerp)");
    itp->add_option("--d", itp_d, "Coefficients JSON c11 (bilerp)");
    itp->add_option("--mix-mask", itp_mix, "Comma-separated 0/1 per index (mix)");
    itp->add_option("--bases", itp_bases, "Layer bases PNG (fade)");
    itp->add_option("--alpha", itp_alpha, "Layer alpha PNG (fade)");
    itp->add_option("--t", itp_t, "Interpolation parameter in [0,1]");
    itp->add_option("--u", itp_u, "Bilinear u in [0,1]");
    itp->add_option("--v", itp_v, "Bilinear v in [0,1]");
    itp->add_option("--out", itp_out, "Output path (JSON or prefix)")->required();
    itp->add_option("--bitdepth", itp_bitdepth, "PNG bit depth (8 or 16)");

    // eval
    auto* ev = app.add_subcommand("eval", "Region metrics between two images");
    std::string ev_ref, ev_test, ev_labels, ev_mask, ev_out;
    ev->add_option("--ref", ev_ref, "Reference PNG")->required();
    ev->add_option("--test", ev_test, "Test PNG")->required();
    ev->add_option("--labels", ev_labels, "Segmentation label PNG");
    ev->add_option("--mask", ev_mask, "Face mask PNG (used when no labels)");
    ev->add_option("--out", ev_out, "Output JSON (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (gen->parsed()) {
        makeup::gen_synthetic(spec, gen_out);
        std::cout << "wrote " << spec.count << " layers to " << gen_out << "\n";
    } else if (build->parsed()) {
        const auto corpus = makeup::load_corpus(build_in);
        const auto prior = makeup::build_pca(corpus, build_k);
        makeup::save_model(prior, build_out);
        std::cout << "model: " << prior.width << "x" << prior.height
                  << " k=" << prior.k << " (requested " << build_k << ")\n";
    } else if (fit->parsed()) {
        const auto prior = makeup::load_model(fit_model);
        const auto bare = makeup::load_texture(fit_bare, 3);
        const auto target = makeup::load_texture(fit_target, 3);
        const auto mask = makeup::load_mask(fit_mask);
        makeup::FitConfig cfg =
            fit_config.empty() ? makeup::FitConfig{} : read_fit_config(fit_config);
        if (fit_iters >= 0) cfg.iterations = fit_iters;
        const Coefficients init = fit_init.empty()
                                      ? makeup::warm_start(prior, bare, target)
                                      : read_coeffs(fit_init);
        const auto result =
            makeup::fit_coeffs(prior, bare, target, mask, cfg, init);
        write_coeffs(result.coefficients, fit_out);
        write_history_csv(result.history, fit_history.empty()
                                              ? fit_out + ".history.csv"
                                              : fit_history);
        std::cout << "final loss " << result.history.back().total << " best "
                  << (result.converged ? "(converged)" : "(not converged)")
                  << "\n";
    } else if (dec->parsed()) {
        const auto prior = makeup::load_model(dec_model);
        save_layer(makeup::decode(prior, read_coeffs(dec_coeffs)), dec_out,
                   dec_bitdepth);
    } else if (smp->parsed()) {
        const auto prior = makeup::load_model(smp_model);
        write_coeffs(makeup::sample(prior, smp_seed, smp_scale), smp_out);
    } else if (trf->parsed()) {
        const auto prior = makeup::load_model(trf_model);
        const auto bare = makeup::load_texture(trf_bare, 3);
        makeup::save_texture(makeup::transfer(prior, read_coeffs(trf_coeffs), bare),
                             trf_out, trf_bitdepth);
    } else if (itp->parsed()) {
        if (itp_mode == "coeff") {
            write_coeffs(makeup::lerp_coeffs(read_coeffs(itp_a),
                                             read_coeffs(itp_b), itp_t),
                         itp_out);
        } else if (itp_mode == "mix") {
            write_coeffs(makeup::mix_coeffs(read_coeffs(itp_a), read_coeffs(itp_b),
                                            parse_mix_mask(itp_mix)),
                         itp_out);
        } else if (itp_mode == "bilerp") {
            write_coeffs(
                makeup::bilerp_coeffs(read_coeffs(itp_a), read_coeffs(itp_b),
                                      read_coeffs(itp_c), read_coeffs(itp_d),
                                      itp_u, itp_v),
                itp_out);
        } else if (itp_mode == "fade") {
            makeup::MakeupLayer layer{makeup::load_texture(itp_bases, 3),
                                      makeup::load_texture(itp_alpha, 1)};
            save_layer(makeup::fade_alpha(layer, itp_t), itp_out, itp_bitdepth);
        } else {
            throw makeup::InvalidArgumentError(
                "interpolate mode must be coeff, mix, bilerp or fade");
        }
    } else if (ev->parsed()) {
        const auto ref = makeup::load_texture(ev_ref, 3);
        const auto test = makeup::load_texture(ev_test, 3);
        json records = json::array();
        auto add = [&records](const char* metric, const char* region, double v) {
            records.push_back({{"metric", metric}, {"region", region}, {"value", v}});
        };
        if (!ev_labels.empty()) {
            const auto regions =
                makeup::regions_from_labels(makeup::load_texture(ev_labels, 1));
            // Dilated eye regions may spill outside the face; metrics only
            // consider facial pixels.
            auto intersect = [&regions](const makeup::FaceMask& m) {
                makeup::FaceMask out = m;
                for (size_t i = 0; i < out.bits.size(); ++i)
                    out.bits[i] = out.bits[i] && regions.face.bits[i];
                return out;
            };
            add("rmse", "face", makeup::rmse(ref, test, regions.face));
            add("ssim", "face", makeup::ssim(ref, test, regions.face));
            add("hm", "eyes", makeup::hm_distance(ref, test, intersect(regions.eyes)));
            add("hm", "lips", makeup::hm_distance(ref, test, intersect(regions.lips)));
        } else if (!ev_mask.empty()) {
            const auto mask = makeup::load_mask(ev_mask);
            add("rmse", "face", makeup::rmse(ref, test, mask));
            add("ssim", "face", makeup::ssim(ref, test, mask));
            add("hm", "face", makeup::hm_distance(ref, test, mask));
        } else {
            throw makeup::InvalidArgumentError("eval needs --labels or --mask");
        }
        if (ev_out.empty()) {
            std::cout << records.dump(2) << "\n";
        } else {
            std::ofstream out(ev_out);
            if (!out) throw makeup::IoError("cannot write " + ev_out);
            out << records.dump(2) << "\n";
        }
    }
    return 0;
}

template <typename E>
bool report(const std::exception& e, const char* name) {
    if (dynamic_cast<const E*>(&e)) {
        std::cerr << "error: " << name << ": " << e.what() << "\n";
        return true;
    }
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        // One machine-parsable line per failure.
        if (!report<makeup::IoError>(e, "IoError") &&
            !report<makeup::DecodeError>(e, "DecodeError") &&
            !report<makeup::ChannelMismatchError>(e, "ChannelMismatchError") &&
            !report<makeup::DimensionError>(e, "DimensionError") &&
            !report<makeup::EmptyMaskError>(e, "EmptyMaskError") &&
            !report<makeup::ManifestError>(e, "ManifestError") &&
            !report<makeup::SizeMismatchError>(e, "SizeMismatchError") &&
            !report<makeup::ChecksumError>(e, "ChecksumError") &&
            !report<makeup::InvalidArgumentError>(e, "InvalidArgumentError")) {
            std::cerr << "error: RuntimeError: " << e.what() << "\n";
        }
        return 1;
    }
}
