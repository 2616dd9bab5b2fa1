#include "makeup/fit.hpp"

#include <cmath>
#include <limits>

#include "makeup/metrics.hpp"
#include "nlohmann/json.hpp"

namespace makeup {

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Mirror correspondence as a pixel-index table.
std::vector<uint32_t> mirror_table(int width, int height, const FitConfig& cfg) {
    if (cfg.mirror_map) {
        const auto& m = *cfg.mirror_map;
        const size_t n = static_cast<size_t>(width) * height;
        if (m.size() != n)
            throw DimensionError("mirror_map length does not match texture size");
        for (uint32_t idx : m)
            if (idx >= n) throw InvalidArgumentError("mirror_map index out of range");
        return m;
    }
    std::vector<uint32_t> m(static_cast<size_t>(width) * height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            m[static_cast<size_t>(y) * width + x] =
                static_cast<uint32_t>(y) * width + (width - 1 - x);
    return m;
}

struct LossContext {
    const PcaPrior& prior;
    const UvMap& bare;
    const UvMap& target;
    const FaceMask& face;
    const FitConfig& cfg;
    std::vector<uint32_t> mirror;
    std::vector<size_t> masked;  // masked pixel indices, fixed order

    LossContext(const PcaPrior& p, const UvMap& b, const UvMap& t,
                const FaceMask& f, const FitConfig& c)
        : prior(p), bare(b), target(t), face(f), cfg(c),
          mirror(mirror_table(p.width, p.height, c)) {
        if (b.channels != 3 || t.channels != 3 || b.width != p.width ||
            b.height != p.height || !b.same_shape(t) || f.width != p.width ||
            f.height != p.height) {
            throw DimensionError("loss: bare/target/mask dimensions must match "
                                 "the model");
        }
        masked.reserve(f.bits.size());
        for (size_t i = 0; i < f.bits.size(); ++i)
            if (f.bits[i]) masked.push_back(i);
        if (masked.empty()) throw EmptyMaskError("loss: empty face mask");
    }

    // Evaluates the loss breakdown at `coeffs`; when `grad` is non-null, also
    // accumulates the subgradient with respect to the coefficients.
    LossBreakdown eval(const Coefficients& coeffs, Eigen::VectorXd* grad) const {
        const Eigen::VectorXd raw = decode_raw(prior, coeffs);
        Eigen::VectorXd clamped(raw.size());
        for (Eigen::Index i = 0; i < raw.size(); ++i) clamped[i] = clamp01(raw[i]);

        const double n = static_cast<double>(masked.size());
        Eigen::VectorXd grad_tex;
        if (grad) grad_tex = Eigen::VectorXd::Zero(raw.size());

        double pho_sum = 0.0, sym_sum = 0.0, alpha_sum = 0.0;
        const double pho_w = cfg.w_pho / (n * 3.0);
        const double sym_w = cfg.w_sym / (n * 4.0);
        const double alpha_w = cfg.w_alpha / n;

        for (size_t p : masked) {
            const double a = clamped[4 * p + 3];
            for (int c = 0; c < 3; ++c) {
                const double b = clamped[4 * p + c];
                const double bare_v = bare.values[3 * p + c];
                const double am = b * a + (1.0 - a) * bare_v;
                const double r = am - target.values[3 * p + c];
                pho_sum += std::abs(r);
                if (grad) {
                    const double s = pho_w * sign(r);
                    grad_tex[4 * p + c] += s * a;
                    grad_tex[4 * p + 3] += s * (b - bare_v);
                }
            }
            const size_t q = mirror[p];
            for (int c = 0; c < 4; ++c) {
                const double diff = clamped[4 * p + c] - clamped[4 * q + c];
                sym_sum += std::abs(diff);
                if (grad) {
                    const double s = sym_w * sign(diff);
                    grad_tex[4 * p + c] += s;
                    grad_tex[4 * q + c] -= s;
                }
            }
            alpha_sum += std::abs(a);
            if (grad) grad_tex[4 * p + 3] += alpha_w * sign(a);
        }

        LossBreakdown out;
        out.pho = pho_sum * pho_w;
        out.sym = sym_sum * sym_w;
        out.alpha = alpha_sum * alpha_w;
        out.reg = cfg.w_reg * coeffs.values.squaredNorm();
        out.total = out.pho + out.reg + out.sym + out.alpha;

        if (grad) {
            // The decode clamp passes gradient only on interior pixels.
            for (Eigen::Index i = 0; i < raw.size(); ++i)
                if (raw[i] <= 0.0 || raw[i] >= 1.0) grad_tex[i] = 0.0;
            *grad = prior.basis.transpose() * grad_tex +
                    2.0 * cfg.w_reg * coeffs.values;
        }
        return out;
    }
};

}  // namespace

LossBreakdown total_loss(const PcaPrior& prior, const Coefficients& coeffs,
                         const UvMap& bare, const UvMap& target,
                         const FaceMask& face, const FitConfig& cfg) {
    return LossContext(prior, bare, target, face, cfg).eval(coeffs, nullptr);
}

Eigen::VectorXd loss_gradient(const PcaPrior& prior, const Coefficients& coeffs,
                              const UvMap& bare, const UvMap& target,
                              const FaceMask& face, const FitConfig& cfg) {
    Eigen::VectorXd grad;
    LossContext(prior, bare, target, face, cfg).eval(coeffs, &grad);
    return grad;
}

FitResult fit_coeffs(const PcaPrior& prior, const UvMap& bare,
                     const UvMap& target, const FaceMask& face,
                     const FitConfig& cfg, const Coefficients& init) {
    if (init.values.size() != prior.k)
        throw DimensionError("fit_coeffs: init length does not match model k");
    if (cfg.iterations < 0 || cfg.step_size <= 0.0)
        throw InvalidArgumentError("fit_coeffs: bad schedule");

    LossContext ctx(prior, bare, target, face, cfg);

    FitResult result;
    Eigen::VectorXd x = init.values;
    Eigen::VectorXd m = Eigen::VectorXd::Zero(prior.k);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(prior.k);

    Coefficients current{x};
    LossBreakdown loss = ctx.eval(current, nullptr);
    result.history.push_back(loss);
    result.coefficients = current;
    double best = loss.total;

    for (int t = 1; t <= cfg.iterations; ++t) {
        Eigen::VectorXd g;
        ctx.eval(current, &g);
        m = cfg.moment1 * m + (1.0 - cfg.moment1) * g;
        v = cfg.moment2 * v + (1.0 - cfg.moment2) * g.cwiseProduct(g);
        const double bc1 = 1.0 - std::pow(cfg.moment1, t);
        const double bc2 = 1.0 - std::pow(cfg.moment2, t);
        for (int i = 0; i < prior.k; ++i) {
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            x[i] -= cfg.step_size * mhat / (std::sqrt(vhat) + cfg.epsilon);
        }
        current.values = x;
        loss = ctx.eval(current, nullptr);
        result.history.push_back(loss);
        if (loss.total < best) {
            best = loss.total;
            result.coefficients = current;
        }
    }

    const auto& h = result.history;
    if (h.size() >= 6) {
        const double before = h[h.size() - 6].total;
        const double after = h.back().total;
        const double rel = (before - after) / std::max(std::abs(before), 1e-300);
        result.converged = rel < 1e-6;
    }
    return result;
}

Coefficients warm_start(const PcaPrior& prior, const UvMap& bare,
                        const UvMap& target) {
    if (bare.channels != 3 || !bare.same_shape(target) ||
        bare.width != prior.width || bare.height != prior.height) {
        throw DimensionError("warm_start: dimensions must match the model");
    }
    constexpr double kGain = 2.0;
    constexpr double kVisibleAlpha = 0.05;

    MakeupLayer pseudo{UvMap(prior.width, prior.height, 3),
                       UvMap(prior.width, prior.height, 1)};
    const size_t n = pseudo.alpha.pixel_count();
    for (size_t p = 0; p < n; ++p) {
        double dmax = 0.0;
        for (int c = 0; c < 3; ++c)
            dmax = std::max(dmax, std::abs(target.values[3 * p + c] -
                                           bare.values[3 * p + c]));
        const double a = clamp01(dmax * kGain);
        pseudo.alpha.values[p] = a;
        for (int c = 0; c < 3; ++c) {
            // Un-blend the color estimate: with alpha ~ a, the makeup color
            // behind target = Mb*a + (1-a)*bare is bare + (target-bare)/a.
            const double bare_v = bare.values[3 * p + c];
            pseudo.bases.values[3 * p + c] =
                a > kVisibleAlpha
                    ? clamp01(bare_v + (target.values[3 * p + c] - bare_v) / a)
                    : prior.mean[4 * p + c];
        }
    }
    return project(prior, pseudo);
}

CycleReport cycle_check(const PcaPrior& prior, const Coefficients& coeffs,
                        const UvMap& bare_other, const FaceMask& face,
                        const FitConfig& cfg) {
    const MakeupLayer layer = decode(prior, coeffs);
    const UvMap transferred = compose_alpha_blend(layer, bare_other);

    const Coefficients init = warm_start(prior, bare_other, transferred);
    const FitResult refit =
        fit_coeffs(prior, bare_other, transferred, face, cfg, init);

    CycleReport report;
    report.original = coeffs;
    report.refit = refit.coefficients;
    report.coeff_distance =
        (coeffs.values - refit.coefficients.values).squaredNorm() /
        std::max<Eigen::Index>(1, coeffs.values.size());
    const UvMap recomposed =
        compose_alpha_blend(decode(prior, refit.coefficients), bare_other);
    report.composite_rmse = rmse(recomposed, transferred, face);
    return report;
}

FitConfig fit_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgumentError(std::string("bad fit config JSON: ") + e.what());
    }
    FitConfig cfg;
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& key = it.key();
            if (key == "w_pho") cfg.w_pho = it->get<double>();
            else if (key == "w_reg") cfg.w_reg = it->get<double>();
            else if (key == "w_sym") cfg.w_sym = it->get<double>();
            else if (key == "w_alpha") cfg.w_alpha = it->get<double>();
            else if (key == "step_size") cfg.step_size = it->get<double>();
            else if (key == "iterations") cfg.iterations = it->get<int>();
            else if (key == "moment1") cfg.moment1 = it->get<double>();
            else if (key == "moment2") cfg.moment2 = it->get<double>();
            else if (key == "epsilon") cfg.epsilon = it->get<double>();
            else if (key == "mirror_map")
                cfg.mirror_map = it->get<std::vector<uint32_t>>();
            else
                throw InvalidArgumentError("unknown fit config field: " + key);
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgumentError(std::string("bad fit config JSON: ") + e.what());
    }
    if (cfg.w_pho < 0 || cfg.w_reg < 0 || cfg.w_sym < 0 || cfg.w_alpha < 0 ||
        cfg.step_size <= 0 || cfg.iterations < 0) {
        throw InvalidArgumentError("fit config violates invariants");
    }
    return cfg;
}

std::string fit_config_to_json(const FitConfig& cfg) {
    nlohmann::json j = {
        {"w_pho", cfg.w_pho},       {"w_reg", cfg.w_reg},
        {"w_sym", cfg.w_sym},       {"w_alpha", cfg.w_alpha},
        {"step_size", cfg.step_size}, {"iterations", cfg.iterations},
        {"moment1", cfg.moment1},   {"moment2", cfg.moment2},
        {"epsilon", cfg.epsilon},
    };
    if (cfg.mirror_map) j["mirror_map"] = *cfg.mirror_map;
    return j.dump(2);
}

}  // namespace makeup
