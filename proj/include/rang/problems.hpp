#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "rang/network.hpp"

namespace rang {

struct LossWeights {
    double w_pde = 0.2;
    double w_0 = 2.0;
    double w_b = 2.0;
};

struct TrainDefaults {
    size_t n_pde;
    size_t max_iter;
    size_t interval;
    size_t replicates;
    size_t n_ic = 200; // equispaced points per initial segment
    size_t n_bc = 200; // equispaced points per boundary segment
    LossWeights weights{};
};

// Uniform reference grid (inclusive endpoints) loaded from file, used for
// problems whose reference solution is numerical.
struct GridReference {
    Rect rect; // x spatial, y time
    size_t nx, ny;
    int comps;
    std::vector<double> values; // row-major over (j, i), comps interleaved

    double value(size_t i, size_t j, int c) const {
        return values[(j * nx + i) * static_cast<size_t>(comps) + static_cast<size_t>(c)];
    }
    Point2 node(size_t i, size_t j) const {
        return {rect.xmin + static_cast<double>(i) * rect.width() / static_cast<double>(nx - 1),
                rect.ymin + static_cast<double>(j) * rect.height() / static_cast<double>(ny - 1)};
    }
};

GridReference load_grid_reference(const std::string& path, const Rect& expected, int comps);

// Evaluator handed to condition builders: network derivative bundles at a
// point, with the requested jet degrees, on the ambient tape.
using NetEvalT = std::function<std::vector<DV<TV>>(Point2, int x_deg, int y_deg)>;

// One benchmark case. Points use x = spatial coordinate and y = time (or the
// second spatial coordinate for the Poisson problem).
struct PdeProblem {
    std::string name;
    Rect domain{0.0, 1.0, 0.0, 1.0};
    int n_comps = 1;
    int x_deg = 2; // highest x derivative the residual needs
    int y_deg = 1;
    bool has_ic = true;

    std::function<double(std::span<const DV<double>>, Point2)> residual_sq_num;
    std::function<TV(std::span<const DV<TV>>, Point2)> residual_sq_tape;
    std::function<TV(Tape&, const NetEvalT&, size_t n)> ic_loss; // null when !has_ic
    std::function<TV(Tape&, const NetEvalT&, size_t n)> bc_loss;

    // Analytic reference (per-component values), or a loaded grid reference.
    std::function<std::vector<double>(Point2)> reference;
    std::shared_ptr<GridReference> ref_grid;

    TrainDefaults defaults;

    MlpArch arch() const { return MlpArch::standard(n_comps); }
};

// --- shared residual formulas (templated over double / tape scalar) ---

template <class S>
S allen_cahn_residual_sq(const DV<S>& d) {
    S r = d.ut - 0.0001 * d.uxx + 5.0 * (d.u * d.u * d.u) - 5.0 * d.u;
    return sq(r);
}

template <class S>
S wave_residual_sq(const DV<S>& d) {
    S r = d.utt - 3.0 * d.uxx;
    return sq(r);
}

template <class S>
S schrodinger_residual_sq(const DV<S>& v, const DV<S>& w) {
    S mag2 = v.u * v.u + w.u * w.u;
    S re = -w.ut + 0.5 * v.uxx + mag2 * v.u;
    S im = v.ut + 0.5 * w.uxx + mag2 * w.u;
    return sq(re) + sq(im);
}

template <class S>
S kdv_residual_sq(const DV<S>& d) {
    S r = d.ut + 6.0 * (d.u * d.ux) + d.uxxx;
    return sq(r);
}

double poisson_forcing(double x, double y); // two-Gaussian w_sigma, sigma = 0.1

template <class S>
S poisson_residual_sq(const DV<S>& d, Point2 p) {
    S r = d.uxx + d.utt - poisson_forcing(p.x, p.y);
    return sq(r);
}

template <class S>
S convdiff_residual_sq(const DV<S>& d) {
    S r = d.ut + 4.0 * d.ux - 0.05 * d.uxx;
    return sq(r);
}

// --- reference solutions and initial data ---

double wave_reference(double t, double x);
double allen_cahn_ic(double x); // x^2 cos(pi x)
std::vector<double> schrodinger_ic(double x); // (2 sech x, 0)
double kdv_reference(double t, double x);
double poisson_reference(double x, double y);
double convdiff_reference(double t, double x);

// --- the six benchmark problems ---

PdeProblem allen_cahn(std::shared_ptr<GridReference> ref = nullptr,
                      bool printed_ic_slope_term = false);
PdeProblem wave1d();
PdeProblem schrodinger1d(std::shared_ptr<GridReference> ref = nullptr);
PdeProblem kdv();
PdeProblem poisson2d();
PdeProblem convection_diffusion();

PdeProblem problem_by_name(const std::string& name, const std::string& ref_path = "");

} // namespace rang
