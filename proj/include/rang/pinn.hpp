#pragma once

#include <optional>

#include "rang/errormap.hpp"
#include "rang/problems.hpp"

namespace rang {

struct TrainConfig {
    size_t max_iter = 1000;
    size_t interval = 1000; // resample interval I
    size_t n_pde = 1000;
    double ratio = 100.0;
    std::optional<double> beta;            // overrides the sampler's memory coefficient
    std::optional<BisectionBounds> bounds; // default: BisectionBounds::defaults_for(n_pde)
    uint64_t seed = 1;
    size_t err_nx = 128, err_ny = 128; // residual-grid resolution
    size_t mse_grid = 256;             // test grid per axis (analytic references)
    size_t log_every = 100;            // MSE logging cadence
    size_t n_ic = 200, n_bc = 200;
    LossWeights weights{};

    static TrainConfig for_problem(const PdeProblem& p, uint64_t seed);
};

struct LogRow {
    size_t iter;
    double loss, l0, lb, lpde, mse, s;
};

struct TrainResult {
    MlpParams params;
    std::vector<LogRow> history;    // one row per log_every iterations, plus the final state
    std::vector<NodeSet> snapshots; // collocation set in effect after each (re)sample
    std::vector<double> s_history;  // calibrated radius scale per resample (0 for non-FF samplers)
    std::vector<char> calib_ok;     // per resample: count within 5% (vs width-tolerance exit)
    bool diverged = false;
    size_t diverged_iter = 0;
    double final_mse = 0.0; // last finite MSE
};

// Mean squared PDE residual over the node set, plus per-node |r| for
// diagnostics. Numeric path (no parameter gradient).
std::pair<double, std::vector<double>> pde_loss(const PdeProblem& problem, const MlpParams& params,
                                                const NodeSet& nodes);

// Initial- and boundary-condition losses (L_0 = 0 for problems without an
// initial condition).
std::pair<double, double> ic_bc_losses(const PdeProblem& problem, const MlpParams& params,
                                       size_t n_ic = 200, size_t n_bc = 200);

double total_loss(const LossWeights& w, double l_pde, double l_0, double l_b);

// |r_pde| at every node of a cell-centered grid over the problem domain.
GridErrorMap residual_grid(const PdeProblem& problem, const MlpParams& params, size_t nx,
                           size_t ny);

// Mean squared error against the reference on the test grid (the reference
// file's native grid when the reference is numerical, grid_n x grid_n
// otherwise); 2-component outputs use the squared Euclidean norm per point.
double mse_on_grid(const MlpParams& params, const PdeProblem& problem, size_t grid_n = 256);

// Node counts per equal-width bin along the time (y) axis.
std::vector<size_t> time_histogram(const NodeSet& ns, const Rect& rect, size_t n_bins);

// Full training loop: (re)generate collocation nodes with the chosen
// strategy, assemble the weighted loss on a replayable tape, Adam-step every
// iteration, log MSE every log_every iterations.
TrainResult train(const PdeProblem& problem, const TrainConfig& cfg, SamplerKind sampler);

// Persist one run: {problem}_{sampler}_{seed}.csv with columns
// iter,loss,L0,Lb,Lpde,mse,s and one node-snapshot CSV per resample.
void save_train_result(const TrainResult& result, const std::string& outdir,
                       const std::string& problem, SamplerKind sampler, uint64_t seed);

} // namespace rang
