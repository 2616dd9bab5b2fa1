// Microbenchmarks for the hot paths: decoding, loss evaluation, gradient,
// one optimizer run and the SSIM metric.

#include <benchmark/benchmark.h>

#include <random>

#include "makeup/fit.hpp"
#include "makeup/metrics.hpp"
#include "makeup/prior.hpp"
#include "makeup/synth.hpp"
#include "makeup/uvtex.hpp"

namespace {

using namespace makeup;

struct Fixture {
    PcaPrior prior;
    UvMap bare;
    UvMap target;
    FaceMask face;
    Coefficients coeffs;
    FitConfig cfg;

    explicit Fixture(int size) {
        SyntheticSpec spec;
        spec.seed = 3;
        spec.count = 10;
        spec.size = size;
        std::vector<MakeupLayer> corpus;
        for (int i = 0; i < spec.count; ++i)
            corpus.push_back(gen_sample(spec, i).layer);
        prior = build_pca(corpus, 20);
        bare = gen_sample(spec, 0).bare;
        coeffs = project(prior, corpus[2]);
        target = compose_alpha_blend(decode(prior, coeffs), bare);
        face = gen_face_mask(size);
    }
};

Fixture& fixture(int size) {
    static Fixture f64(64);
    static Fixture f128(128);
    return size == 64 ? f64 : f128;
}

void bm_decode(benchmark::State& state) {
    Fixture& f = fixture(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(decode(f.prior, f.coeffs));
}
BENCHMARK(bm_decode)->Arg(64)->Arg(128);

void bm_total_loss(benchmark::State& state) {
    Fixture& f = fixture(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            total_loss(f.prior, f.coeffs, f.bare, f.target, f.face, f.cfg));
}
BENCHMARK(bm_total_loss)->Arg(64)->Arg(128);

void bm_loss_gradient(benchmark::State& state) {
    Fixture& f = fixture(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            loss_gradient(f.prior, f.coeffs, f.bare, f.target, f.face, f.cfg));
}
BENCHMARK(bm_loss_gradient)->Arg(64)->Arg(128);

void bm_fit_40_iterations(benchmark::State& state) {
    Fixture& f = fixture(64);
    const Coefficients init = warm_start(f.prior, f.bare, f.target);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            fit_coeffs(f.prior, f.bare, f.target, f.face, f.cfg, init));
}
BENCHMARK(bm_fit_40_iterations)->Unit(benchmark::kMillisecond);

void bm_ssim(benchmark::State& state) {
    Fixture& f = fixture(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(ssim(f.target, f.bare, f.face));
}
BENCHMARK(bm_ssim)->Arg(64)->Arg(128);

void bm_hm_distance(benchmark::State& state) {
    Fixture& f = fixture(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(hm_distance(f.target, f.bare, f.face));
}
BENCHMARK(bm_hm_distance)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
