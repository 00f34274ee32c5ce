#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rang {

using VarRef = int32_t;

// Append-only record of elementary scalar operations. Values are computed
// eagerly at build time and can be replayed with forward() after the backing
// parameter vector changes; backward() accumulates exact parameter gradients
// in one reverse sweep.
//
// Parameters are not tape nodes: Leaf and Dot reference slots of an external
// flat vector, so a training iteration is build-once / replay-many.
//
// Dot is the fused workhorse: a contiguous weight row dotted with a
// contiguous run of tape values (optionally plus a bias slot). The jet-tanh
// kinds (TanhD1..TanhD3) evaluate the degree-k Taylor coefficient of
// tanh(a(delta)) from the lower-order output coefficients, which must sit at
// a fixed stride (see network.cpp for the coefficient-major layout).
class Tape {
public:
    enum Kind : uint8_t {
        KConst,
        KLeaf,
        KAdd,
        KSub,
        KMul,
        KDiv,
        KAffine, // imm_m * a + imm_b
        KSquare,
        KCube,
        KTanh,
        KTanhD1, // u1 = (1 - u0^2) a1;            a = u0, b = a1
        KTanhD2, // u2 = p0 a2 + p1 a1 / 2;        a = u0 (u1 = a+c), b = a1 (a2 = b+d)
        KTanhD3, // u3 = p0 a3 + (2 p1 a2 + p2 a1)/3
        KDot,    // sum_k w[wi+k] * val[a+k] (+ params[bias]); b = len, c = wi, d = bias|-1
    };

    struct Node {
        Kind kind;
        VarRef a = -1;
        VarRef b = -1;
        int32_t c = 0;
        int32_t d = 0;
        double imm_m = 0.0;
        double imm_b = 0.0;
    };

    explicit Tape(std::span<const double> params = {}) : params_(params) {}

    // Rebind the parameter vector (size may only grow between binds).
    void set_params(std::span<const double> params) { params_ = params; }
    size_t n_params() const { return params_.size(); }
    size_t size() const { return nodes_.size(); }

    double val(VarRef v) const { return val_[static_cast<size_t>(v)]; }

    VarRef constant(double v);
    VarRef leaf(int32_t param_index);
    VarRef add(VarRef a, VarRef b);
    VarRef sub(VarRef a, VarRef b);
    VarRef mul(VarRef a, VarRef b);
    VarRef div(VarRef a, VarRef b);
    VarRef affine(VarRef a, double m, double b0);
    VarRef square(VarRef a);
    VarRef cube(VarRef a);
    VarRef tanh(VarRef a);
    VarRef tanh_d1(VarRef u0, VarRef a1);
    VarRef tanh_d2(VarRef u0, VarRef a1, int32_t u_stride, int32_t a_stride);
    VarRef tanh_d3(VarRef u0, VarRef a1, int32_t u_stride, int32_t a_stride);
    VarRef dot(int32_t w_index, int32_t len, VarRef x0, int32_t bias_index = -1);

    // Recompute all values against the currently bound parameters.
    void forward();

    // d(output)/d(params[i]) accumulated into grad (grad is zeroed here).
    void backward(VarRef output, std::span<double> grad);

private:
    VarRef push(const Node& n, double value);
    double eval(const Node& n) const;

    std::span<const double> params_;
    std::vector<Node> nodes_;
    std::vector<double> val_;
    std::vector<double> adj_; // scratch for backward
};

// Convenience expression wrapper so PDE residuals read like formulas and can
// be shared between the tape path and a plain-double path via templates.
struct TV {
    Tape* t = nullptr;
    VarRef v = -1;
};

inline TV operator+(TV a, TV b) { return {a.t, a.t->add(a.v, b.v)}; }
inline TV operator-(TV a, TV b) { return {a.t, a.t->sub(a.v, b.v)}; }
inline TV operator*(TV a, TV b) { return {a.t, a.t->mul(a.v, b.v)}; }
inline TV operator*(double k, TV a) { return {a.t, a.t->affine(a.v, k, 0.0)}; }
inline TV operator+(TV a, double k) { return {a.t, a.t->affine(a.v, 1.0, k)}; }
inline TV operator-(TV a, double k) { return {a.t, a.t->affine(a.v, 1.0, -k)}; }
inline TV operator-(TV a) { return {a.t, a.t->affine(a.v, -1.0, 0.0)}; }
inline TV sq(TV a) { return {a.t, a.t->square(a.v)}; }
inline double sq(double a) { return a * a; }

// Max relative error between backward() gradients and central finite
// differences of a scalar program; test oracle.
double check_gradient_fd(const std::function<double(std::span<const double>)>& f,
                         std::span<const double> point,
                         std::span<const double> analytic_grad, double step = 1e-5);

} // namespace rang
