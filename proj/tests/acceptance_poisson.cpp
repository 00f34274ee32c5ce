#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "rang/suite.hpp"

using namespace rang;

// Poisson benchmark at the paper's settings (400 nodes, 3000 iterations,
// resampling interval 100) with 5 replicates for four samplers. The adaptive
// sampler must reach a median MSE of 1e-3 and beat one-time uniform random
// sampling by at least 5x.
TEST_CASE("criterion 4: poisson reproduction") {
    std::filesystem::remove_all("acc_poisson");
    SuiteSpec spec;
    spec.problem = "poisson";
    spec.samplers = {SamplerKind::Random, SamplerKind::Hammersley, SamplerKind::FfR,
                     SamplerKind::RANGm};
    spec.replicates = 5;
    spec.base_seed = 1;
    spec.outdir = "acc_poisson";
    SuiteStats stats = run_suite(spec);

    double median_random = 0.0, median_rangm = 0.0;
    for (const SamplerStats& r : stats.rows) {
        std::printf("  %-12s median MSE %.6g (mean %.6g, diverged %zu)\n",
                    sampler_name(r.sampler), r.p50, r.mean, r.diverged);
        if (r.sampler == SamplerKind::Random) median_random = r.p50;
        if (r.sampler == SamplerKind::RANGm) median_rangm = r.p50;
    }
    const bool ok_abs = median_rangm <= 1e-3;
    const bool ok_gap = median_rangm * 5.0 <= median_random;
    std::printf("[criterion 4] %s\n", ok_abs && ok_gap ? "PASS" : "FAIL");
    std::fflush(stdout);
    CHECK(ok_abs);
    CHECK(ok_gap);
}
