#pragma once

#include <vector>

#include "rang/geometry.hpp"
#include "rang/rng.hpp"
#include "rang/tape.hpp"

namespace rang {

// Derivative bundle of one network output component at one point, generic
// over the scalar type (double for plain evaluation, TV on the tape).
template <class S>
struct DV {
    S u{}, ux{}, uxx{}, uxxx{}, ut{}, utt{};
};

struct MlpArch {
    std::vector<int> sizes; // e.g. {2, 64, 64, 64, 64, 1}

    int n_layers() const { return static_cast<int>(sizes.size()) - 1; }
    int n_inputs() const { return sizes.front(); }
    int n_outputs() const { return sizes.back(); }
    int n_params() const;
    // Offsets into the flat parameter vector; weights are row-major
    // [out][in], biases follow the weight block of each layer.
    int weight_offset(int layer) const;
    int bias_offset(int layer) const;

    static MlpArch standard(int n_outputs) { return {{2, 64, 64, 64, 64, n_outputs}}; }
};

struct MlpParams {
    MlpArch arch;
    std::vector<double> values;
};

// Glorot-uniform weights, zero biases.
MlpParams init_params(const MlpArch& arch, RngStream& rng);

struct AdamState {
    std::vector<double> m, v;
    int64_t t = 0;
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    explicit AdamState(size_t n) : m(n, 0.0), v(n, 0.0) {}
};

// Standard Adam update with bias correction; throws on non-finite gradients.
void adam_step(MlpParams& params, std::span<const double> grads, AdamState& state);

// Emit the full tanh-MLP forward pass with directional jets (degree x_deg in
// x, y_deg in y) onto the tape. The value track is shared between the two
// directions; the tape must already be bound to the parameter vector.
// Returns one derivative bundle per output component.
std::vector<DV<TV>> emit_forward_jet(Tape& tape, const MlpArch& arch, int param_base, Point2 p,
                                     int x_deg, int y_deg);

// Tape-free evaluation of the same quantities (used for residual grids and
// MSE evaluation, where no parameter gradient is needed).
std::vector<DV<double>> eval_derivs(const MlpParams& params, Point2 p, int x_deg, int y_deg);

// Value-only forward pass.
std::vector<double> eval_values(const MlpParams& params, Point2 p);

// Parameter checkpoint: first line is the arch, then one value per line.
void save_params_csv(const MlpParams& params, const std::string& path);
MlpParams load_params_csv(const std::string& path);

} // namespace rang
