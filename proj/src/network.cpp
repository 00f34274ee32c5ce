#include "rang/network.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rang {

int MlpArch::n_params() const {
    int n = 0;
    for (int l = 0; l < n_layers(); ++l) n += sizes[l] * sizes[l + 1] + sizes[l + 1];
    return n;
}

int MlpArch::weight_offset(int layer) const {
    int off = 0;
    for (int l = 0; l < layer; ++l) off += sizes[l] * sizes[l + 1] + sizes[l + 1];
    return off;
}

int MlpArch::bias_offset(int layer) const {
    return weight_offset(layer) + sizes[layer] * sizes[layer + 1];
}

MlpParams init_params(const MlpArch& arch, RngStream& rng) {
    if (arch.n_layers() < 1) throw std::invalid_argument("init_params: empty architecture");
    MlpParams p{arch, std::vector<double>(static_cast<size_t>(arch.n_params()), 0.0)};
    for (int l = 0; l < arch.n_layers(); ++l) {
        const int fan_in = arch.sizes[l], fan_out = arch.sizes[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        double* w = p.values.data() + arch.weight_offset(l);
        for (int k = 0; k < fan_in * fan_out; ++k) w[k] = rng.uniform(-limit, limit);
        // biases stay zero
    }
    return p;
}

void adam_step(MlpParams& params, std::span<const double> grads, AdamState& state) {
    const size_t n = params.values.size();
    if (grads.size() != n || state.m.size() != n)
        throw std::invalid_argument("adam_step: shape mismatch");
    for (double g : grads)
        if (!std::isfinite(g)) throw std::runtime_error("adam_step: non-finite gradient");
    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (size_t i = 0; i < n; ++i) {
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grads[i];
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grads[i] * grads[i];
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params.values[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    }
}

namespace {

// Track bases for one layer's activations, laid out coefficient-major:
// [A0 (W)] [Ax1..Axdx (W each)] [A0copy, Ay1..Aydy when both directions].
struct Tracks {
    VarRef t0 = -1;
    std::array<VarRef, 3> x{-1, -1, -1};
    std::array<VarRef, 3> y{-1, -1, -1};
};

} // namespace

std::vector<DV<TV>> emit_forward_jet(Tape& tape, const MlpArch& arch, int param_base, Point2 p,
                                     int x_deg, int y_deg) {
    if (arch.n_inputs() != 2) throw std::invalid_argument("emit_forward_jet: arch must take 2 inputs");
    if (x_deg < 0 || x_deg > 3 || y_deg < 0 || y_deg > 2)
        throw std::invalid_argument("emit_forward_jet: unsupported jet degree");

    // Input tracks, each a contiguous pair (x slot, y slot).
    Tracks prev;
    prev.t0 = tape.constant(p.x);
    tape.constant(p.y);
    for (int k = 1; k <= x_deg; ++k) {
        prev.x[k - 1] = tape.constant(k == 1 ? 1.0 : 0.0);
        tape.constant(0.0);
    }
    for (int k = 1; k <= y_deg; ++k) {
        prev.y[k - 1] = tape.constant(0.0);
        tape.constant(k == 1 ? 1.0 : 0.0);
    }

    for (int l = 0; l < arch.n_layers(); ++l) {
        const int w_in = arch.sizes[l], w_out = arch.sizes[l + 1];
        const int w_off = param_base + arch.weight_offset(l);
        const int b_off = param_base + arch.bias_offset(l);

        Tracks z;
        z.t0 = static_cast<VarRef>(tape.size());
        for (int j = 0; j < w_out; ++j) tape.dot(w_off + j * w_in, w_in, prev.t0, b_off + j);
        for (int k = 1; k <= x_deg; ++k) {
            z.x[k - 1] = static_cast<VarRef>(tape.size());
            for (int j = 0; j < w_out; ++j) tape.dot(w_off + j * w_in, w_in, prev.x[k - 1]);
        }
        for (int k = 1; k <= y_deg; ++k) {
            z.y[k - 1] = static_cast<VarRef>(tape.size());
            for (int j = 0; j < w_out; ++j) tape.dot(w_off + j * w_in, w_in, prev.y[k - 1]);
        }

        if (l + 1 == arch.n_layers()) {
            prev = z;
            break; // output layer is affine
        }

        Tracks a;
        a.t0 = static_cast<VarRef>(tape.size());
        for (int j = 0; j < w_out; ++j) tape.tanh(z.t0 + j);
        if (x_deg >= 1) {
            a.x[0] = static_cast<VarRef>(tape.size());
            for (int j = 0; j < w_out; ++j) tape.tanh_d1(a.t0 + j, z.x[0] + j);
            for (int k = 2; k <= x_deg; ++k) {
                a.x[k - 1] = static_cast<VarRef>(tape.size());
                for (int j = 0; j < w_out; ++j) {
                    if (k == 2)
                        tape.tanh_d2(a.t0 + j, z.x[0] + j, w_out, w_out);
                    else
                        tape.tanh_d3(a.t0 + j, z.x[0] + j, w_out, w_out);
                }
            }
        }
        if (y_deg >= 1) {
            // The y jet group needs its own contiguous run starting at the
            // shared value track, so copy A0 in front of it.
            VarRef a0y = a.t0;
            if (x_deg >= 1) {
                a0y = static_cast<VarRef>(tape.size());
                for (int j = 0; j < w_out; ++j) tape.affine(a.t0 + j, 1.0, 0.0);
            }
            a.y[0] = static_cast<VarRef>(tape.size());
            for (int j = 0; j < w_out; ++j) tape.tanh_d1(a0y + j, z.y[0] + j);
            if (y_deg >= 2) {
                a.y[1] = static_cast<VarRef>(tape.size());
                for (int j = 0; j < w_out; ++j) tape.tanh_d2(a0y + j, z.y[0] + j, w_out, w_out);
            }
        }
        prev = a;
    }

    std::vector<DV<TV>> out(static_cast<size_t>(arch.n_outputs()));
    for (int j = 0; j < arch.n_outputs(); ++j) {
        DV<TV>& d = out[static_cast<size_t>(j)];
        d.u = {&tape, static_cast<VarRef>(prev.t0 + j)};
        if (x_deg >= 1) d.ux = {&tape, static_cast<VarRef>(prev.x[0] + j)};
        if (x_deg >= 2) d.uxx = {&tape, tape.affine(prev.x[1] + j, 2.0, 0.0)};
        if (x_deg >= 3) d.uxxx = {&tape, tape.affine(prev.x[2] + j, 6.0, 0.0)};
        if (y_deg >= 1) d.ut = {&tape, static_cast<VarRef>(prev.y[0] + j)};
        if (y_deg >= 2) d.utt = {&tape, tape.affine(prev.y[1] + j, 2.0, 0.0)};
    }
    return out;
}

std::vector<DV<double>> eval_derivs(const MlpParams& params, Point2 p, int x_deg, int y_deg) {
    const MlpArch& arch = params.arch;
    if (x_deg < 0 || x_deg > 3 || y_deg < 0 || y_deg > 2)
        throw std::invalid_argument("eval_derivs: unsupported jet degree");

    // tracks[0] = value, tracks[1..x_deg] = x coefficients, then y coefficients.
    const int nx = x_deg, ny = y_deg;
    const int n_tracks = 1 + nx + ny;
    auto ytrack = [&](int k) { return 1 + nx + (k - 1); };

    std::vector<std::vector<double>> cur(static_cast<size_t>(n_tracks));
    cur[0] = {p.x, p.y};
    for (int k = 1; k <= nx; ++k) cur[static_cast<size_t>(k)] = {k == 1 ? 1.0 : 0.0, 0.0};
    for (int k = 1; k <= ny; ++k) cur[static_cast<size_t>(ytrack(k))] = {0.0, k == 1 ? 1.0 : 0.0};

    std::vector<std::vector<double>> nxt(static_cast<size_t>(n_tracks));
    for (int l = 0; l < arch.n_layers(); ++l) {
        const int w_in = arch.sizes[l], w_out = arch.sizes[l + 1];
        const double* w = params.values.data() + arch.weight_offset(l);
        const double* b = params.values.data() + arch.bias_offset(l);
        for (auto& t : nxt) t.assign(static_cast<size_t>(w_out), 0.0);

        for (int j = 0; j < w_out; ++j) {
            const double* wr = w + j * w_in;
            for (int tr = 0; tr < n_tracks; ++tr) {
                double s = tr == 0 ? b[j] : 0.0;
                const double* x = cur[static_cast<size_t>(tr)].data();
                for (int i = 0; i < w_in; ++i) s += wr[i] * x[i];
                nxt[static_cast<size_t>(tr)][static_cast<size_t>(j)] = s;
            }
        }

        if (l + 1 < arch.n_layers()) {
            for (int j = 0; j < w_out; ++j) {
                const double u0 = std::tanh(nxt[0][static_cast<size_t>(j)]);
                const double p0 = 1.0 - u0 * u0;
                auto apply_dir = [&](int base, int deg) {
                    if (deg < 1) return;
                    const double a1 = nxt[static_cast<size_t>(base)][static_cast<size_t>(j)];
                    const double a2 = deg >= 2 ? nxt[static_cast<size_t>(base + 1)][static_cast<size_t>(j)] : 0.0;
                    const double a3 = deg >= 3 ? nxt[static_cast<size_t>(base + 2)][static_cast<size_t>(j)] : 0.0;
                    const double u1 = p0 * a1;
                    const double u2 = p0 * a2 - u0 * u1 * a1;
                    const double u3 =
                        p0 * a3 - (4.0 * u0 * u1 * a2 + (u1 * u1 + 2.0 * u0 * u2) * a1) / 3.0;
                    nxt[static_cast<size_t>(base)][static_cast<size_t>(j)] = u1;
                    if (deg >= 2) nxt[static_cast<size_t>(base + 1)][static_cast<size_t>(j)] = u2;
                    if (deg >= 3) nxt[static_cast<size_t>(base + 2)][static_cast<size_t>(j)] = u3;
                };
                apply_dir(1, nx);
                apply_dir(1 + nx, ny);
                nxt[0][static_cast<size_t>(j)] = u0;
            }
        }
        std::swap(cur, nxt);
    }

    std::vector<DV<double>> out(static_cast<size_t>(arch.n_outputs()));
    for (int j = 0; j < arch.n_outputs(); ++j) {
        DV<double>& d = out[static_cast<size_t>(j)];
        d.u = cur[0][static_cast<size_t>(j)];
        if (nx >= 1) d.ux = cur[1][static_cast<size_t>(j)];
        if (nx >= 2) d.uxx = 2.0 * cur[2][static_cast<size_t>(j)];
        if (nx >= 3) d.uxxx = 6.0 * cur[3][static_cast<size_t>(j)];
        if (ny >= 1) d.ut = cur[static_cast<size_t>(ytrack(1))][static_cast<size_t>(j)];
        if (ny >= 2) d.utt = 2.0 * cur[static_cast<size_t>(ytrack(2))][static_cast<size_t>(j)];
    }
    return out;
}

std::vector<double> eval_values(const MlpParams& params, Point2 p) {
    auto d = eval_derivs(params, p, 0, 0);
    std::vector<double> out;
    out.reserve(d.size());
    for (const auto& dv : d) out.push_back(dv.u);
    return out;
}

void save_params_csv(const MlpParams& params, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "arch";
    for (int s : params.arch.sizes) out << ',' << s;
    out << '\n';
    char buf[48];
    for (double v : params.values) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", v);
        out << buf;
    }
}

MlpParams load_params_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    std::getline(in, line);
    std::istringstream hdr(line);
    std::string tok;
    std::getline(hdr, tok, ',');
    if (tok != "arch") throw std::runtime_error(path + ": expected arch header");
    MlpArch arch;
    while (std::getline(hdr, tok, ',')) arch.sizes.push_back(std::stoi(tok));
    MlpParams p{arch, {}};
    double v;
    while (in >> v) p.values.push_back(v);
    if (static_cast<int>(p.values.size()) != arch.n_params())
        throw std::runtime_error(path + ": parameter count does not match arch");
    return p;
}

} // namespace rang
