#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "makeup/prior.hpp"
#include "makeup/uvtex.hpp"

namespace makeup {

/// Loss weights and optimizer schedule. Defaults are the stock estimation
/// settings: w_pho=100, w_reg=1e-4, w_sym=8, w_alpha=1, step 1e-2, 40 steps.
struct FitConfig {
    double w_pho = 100.0;
    double w_reg = 1e-4;
    double w_sym = 8.0;
    double w_alpha = 1.0;
    double step_size = 1e-2;
    int iterations = 40;
    double moment1 = 0.9;
    double moment2 = 0.999;
    double epsilon = 1e-8;
    // Optional explicit mirror correspondence: mirror_map[p] is the pixel
    // index paired with p. Defaults to the horizontal mirror.
    std::optional<std::vector<uint32_t>> mirror_map;
};

FitConfig fit_config_from_json(const std::string& text);
std::string fit_config_to_json(const FitConfig& cfg);

/// Weighted loss terms; total is their sum.
struct LossBreakdown {
    double pho = 0.0;
    double reg = 0.0;
    double sym = 0.0;
    double alpha = 0.0;
    double total = 0.0;
};

struct FitResult {
    Coefficients coefficients;            // best-loss iterate
    std::vector<LossBreakdown> history;   // initial evaluation + one per step
    bool converged = false;
};

struct CycleReport {
    Coefficients original;
    Coefficients refit;
    double coeff_distance = 0.0;   // mean squared coefficient difference
    double composite_rmse = 0.0;
};

/// Weighted loss of coefficients against a makeup-applied target:
///   pho   = w_pho  * mean_{mask,rgb} |blend(decode(c), bare) - target|
///   reg   = w_reg  * ||c||^2
///   sym   = w_sym  * mean_{mask,rgba} |M - mirror(M)|
///   alpha = w_alpha* mean_{mask} |M_a|
LossBreakdown total_loss(const PcaPrior& prior, const Coefficients& coeffs,
                         const UvMap& bare, const UvMap& target,
                         const FaceMask& face, const FitConfig& cfg);

/// Analytic subgradient of total_loss. Pixels whose pre-clamp decode falls
/// outside [0,1] pass no gradient.
Eigen::VectorXd loss_gradient(const PcaPrior& prior, const Coefficients& coeffs,
                              const UvMap& bare, const UvMap& target,
                              const FaceMask& face, const FitConfig& cfg);

/// Bias-corrected adaptive gradient descent from init; returns the
/// best-loss iterate. Deterministic for identical inputs.
FitResult fit_coeffs(const PcaPrior& prior, const UvMap& bare,
                     const UvMap& target, const FaceMask& face,
                     const FitConfig& cfg, const Coefficients& init);

/// Heuristic initialization: a pseudo-layer with alpha from the channel-max
/// target/bare difference (gain 2) and bases from the target where visible,
/// projected onto the prior.
Coefficients warm_start(const PcaPrior& prior, const UvMap& bare,
                        const UvMap& target);

/// Transfer-and-refit consistency: composite decode(coeffs) onto a foreign
/// bare face, refit from a warm start, and report coefficient/composite
/// agreement.
CycleReport cycle_check(const PcaPrior& prior, const Coefficients& coeffs,
                        const UvMap& bare_other, const FaceMask& face,
                        const FitConfig& cfg);

}  // namespace makeup
