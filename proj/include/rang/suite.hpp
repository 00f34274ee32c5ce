#pragma once

#include "rang/pinn.hpp"

namespace rang {

struct SuiteSpec {
    std::string problem;
    std::string ref_path; // reference grid file, when the problem needs one
    std::vector<SamplerKind> samplers;
    size_t replicates = 1;
    uint64_t base_seed = 1;
    // Overrides of the problem's training defaults.
    std::optional<size_t> max_iter, interval, n_pde;
    std::string outdir = ".";
};

struct SamplerStats {
    SamplerKind sampler;
    double mean, min, p25, p50, p75, max; // of final MSE across replicates
    size_t diverged;                      // replicates that hit a non-finite loss
};

struct SuiteStats {
    std::vector<SamplerStats> rows;
};

// q-quantile of a sample by linear interpolation between order statistics
// (index q * (n - 1) into the sorted values).
double quantile_linear(std::vector<double> values, double q);

// Run replicates (seeds base_seed + i) of every sampler, persist per-run
// logs, node snapshots, a stats table CSV, and median-MSE-curve CSVs.
SuiteStats run_suite(const SuiteSpec& spec);

// Write renderer-agnostic gnuplot scripts referencing the suite CSVs in
// outdir; throws when no artifacts are present.
void emit_plot_scripts(const std::string& outdir);

} // namespace rang
