#include "rang/tape.hpp"

#include <cmath>
#include <stdexcept>

namespace rang {

VarRef Tape::push(const Node& n, double value) {
    nodes_.push_back(n);
    val_.push_back(value);
    return static_cast<VarRef>(nodes_.size() - 1);
}

VarRef Tape::constant(double v) { return push({KConst, -1, -1, 0, 0, 0.0, v}, v); }

VarRef Tape::leaf(int32_t param_index) {
    if (param_index < 0 || static_cast<size_t>(param_index) >= params_.size())
        throw std::invalid_argument("Tape::leaf: parameter index out of range");
    return push({KLeaf, param_index, -1, 0, 0, 0.0, 0.0}, params_[param_index]);
}

#define RANG_CHECK_REF(r)                                                                         \
    if ((r) < 0 || static_cast<size_t>(r) >= nodes_.size())                                       \
    throw std::invalid_argument("Tape: variable reference not on this tape")

VarRef Tape::add(VarRef a, VarRef b) {
    RANG_CHECK_REF(a);
    RANG_CHECK_REF(b);
    return push({KAdd, a, b, 0, 0, 0, 0}, val_[a] + val_[b]);
}

VarRef Tape::sub(VarRef a, VarRef b) {
    RANG_CHECK_REF(a);
    RANG_CHECK_REF(b);
    return push({KSub, a, b, 0, 0, 0, 0}, val_[a] - val_[b]);
}

VarRef Tape::mul(VarRef a, VarRef b) {
    RANG_CHECK_REF(a);
    RANG_CHECK_REF(b);
    return push({KMul, a, b, 0, 0, 0, 0}, val_[a] * val_[b]);
}

VarRef Tape::div(VarRef a, VarRef b) {
    RANG_CHECK_REF(a);
    RANG_CHECK_REF(b);
    return push({KDiv, a, b, 0, 0, 0, 0}, val_[a] / val_[b]);
}

VarRef Tape::affine(VarRef a, double m, double b0) {
    RANG_CHECK_REF(a);
    return push({KAffine, a, -1, 0, 0, m, b0}, m * val_[a] + b0);
}

VarRef Tape::square(VarRef a) {
    RANG_CHECK_REF(a);
    return push({KSquare, a, -1, 0, 0, 0, 0}, val_[a] * val_[a]);
}

VarRef Tape::cube(VarRef a) {
    RANG_CHECK_REF(a);
    return push({KCube, a, -1, 0, 0, 0, 0}, val_[a] * val_[a] * val_[a]);
}

VarRef Tape::tanh(VarRef a) {
    RANG_CHECK_REF(a);
    return push({KTanh, a, -1, 0, 0, 0, 0}, std::tanh(val_[a]));
}

VarRef Tape::tanh_d1(VarRef u0, VarRef a1) {
    RANG_CHECK_REF(u0);
    RANG_CHECK_REF(a1);
    Node n{KTanhD1, u0, a1, 0, 0, 0, 0};
    return push(n, eval(n));
}

VarRef Tape::tanh_d2(VarRef u0, VarRef a1, int32_t u_stride, int32_t a_stride) {
    RANG_CHECK_REF(u0 + u_stride);
    RANG_CHECK_REF(a1 + a_stride);
    Node n{KTanhD2, u0, a1, u_stride, a_stride, 0, 0};
    return push(n, eval(n));
}

VarRef Tape::tanh_d3(VarRef u0, VarRef a1, int32_t u_stride, int32_t a_stride) {
    RANG_CHECK_REF(u0 + 2 * u_stride);
    RANG_CHECK_REF(a1 + 2 * a_stride);
    Node n{KTanhD3, u0, a1, u_stride, a_stride, 0, 0};
    return push(n, eval(n));
}

VarRef Tape::dot(int32_t w_index, int32_t len, VarRef x0, int32_t bias_index) {
    RANG_CHECK_REF(x0);
    RANG_CHECK_REF(x0 + len - 1);
    if (w_index < 0 || static_cast<size_t>(w_index + len) > params_.size())
        throw std::invalid_argument("Tape::dot: weight range out of bounds");
    if (bias_index >= 0 && static_cast<size_t>(bias_index) >= params_.size())
        throw std::invalid_argument("Tape::dot: bias index out of bounds");
    Node n{KDot, x0, len, w_index, bias_index, 0, 0};
    return push(n, eval(n));
}

double Tape::eval(const Node& n) const {
    switch (n.kind) {
    case KConst: return n.imm_b;
    case KLeaf: return params_[n.a];
    case KAdd: return val_[n.a] + val_[n.b];
    case KSub: return val_[n.a] - val_[n.b];
    case KMul: return val_[n.a] * val_[n.b];
    case KDiv: return val_[n.a] / val_[n.b];
    case KAffine: return n.imm_m * val_[n.a] + n.imm_b;
    case KSquare: return val_[n.a] * val_[n.a];
    case KCube: return val_[n.a] * val_[n.a] * val_[n.a];
    case KTanh: return std::tanh(val_[n.a]);
    case KTanhD1: {
        const double u0 = val_[n.a];
        return (1.0 - u0 * u0) * val_[n.b];
    }
    case KTanhD2: {
        const double u0 = val_[n.a], u1 = val_[n.a + n.c];
        const double a1 = val_[n.b], a2 = val_[n.b + n.d];
        return (1.0 - u0 * u0) * a2 - u0 * u1 * a1;
    }
    case KTanhD3: {
        const double u0 = val_[n.a], u1 = val_[n.a + n.c], u2 = val_[n.a + 2 * n.c];
        const double a1 = val_[n.b], a2 = val_[n.b + n.d], a3 = val_[n.b + 2 * n.d];
        const double p0 = 1.0 - u0 * u0;
        return p0 * a3 - (4.0 * u0 * u1 * a2 + (u1 * u1 + 2.0 * u0 * u2) * a1) / 3.0;
    }
    case KDot: {
        const double* w = params_.data() + n.c;
        const double* x = val_.data() + n.a;
        double s = n.d >= 0 ? params_[n.d] : 0.0;
        for (int32_t k = 0; k < n.b; ++k) s += w[k] * x[k];
        return s;
    }
    }
    return 0.0;
}

void Tape::forward() {
    for (size_t i = 0; i < nodes_.size(); ++i) val_[i] = eval(nodes_[i]);
}

void Tape::backward(VarRef output, std::span<double> grad) {
    RANG_CHECK_REF(output);
    if (grad.size() < params_.size())
        throw std::invalid_argument("Tape::backward: gradient span too small");
    std::fill(grad.begin(), grad.end(), 0.0);
    adj_.assign(nodes_.size(), 0.0);
    adj_[static_cast<size_t>(output)] = 1.0;

    for (size_t i = nodes_.size(); i-- > 0;) {
        const double g = adj_[i];
        if (g == 0.0) continue;
        const Node& n = nodes_[i];
        switch (n.kind) {
        case KConst: break;
        case KLeaf: grad[n.a] += g; break;
        case KAdd:
            adj_[n.a] += g;
            adj_[n.b] += g;
            break;
        case KSub:
            adj_[n.a] += g;
            adj_[n.b] -= g;
            break;
        case KMul:
            adj_[n.a] += g * val_[n.b];
            adj_[n.b] += g * val_[n.a];
            break;
        case KDiv:
            adj_[n.a] += g / val_[n.b];
            adj_[n.b] -= g * val_[n.a] / (val_[n.b] * val_[n.b]);
            break;
        case KAffine: adj_[n.a] += g * n.imm_m; break;
        case KSquare: adj_[n.a] += g * 2.0 * val_[n.a]; break;
        case KCube: adj_[n.a] += g * 3.0 * val_[n.a] * val_[n.a]; break;
        case KTanh: {
            const double t = val_[i];
            adj_[n.a] += g * (1.0 - t * t);
            break;
        }
        case KTanhD1: {
            const double u0 = val_[n.a], a1 = val_[n.b];
            adj_[n.a] += g * (-2.0 * u0 * a1);
            adj_[n.b] += g * (1.0 - u0 * u0);
            break;
        }
        case KTanhD2: {
            const double u0 = val_[n.a], u1 = val_[n.a + n.c];
            const double a1 = val_[n.b], a2 = val_[n.b + n.d];
            adj_[n.a] += g * (-2.0 * u0 * a2 - u1 * a1);
            adj_[n.a + n.c] += g * (-u0 * a1);
            adj_[n.b] += g * (-u0 * u1);
            adj_[n.b + n.d] += g * (1.0 - u0 * u0);
            break;
        }
        case KTanhD3: {
            const double u0 = val_[n.a], u1 = val_[n.a + n.c], u2 = val_[n.a + 2 * n.c];
            const double a1 = val_[n.b], a2 = val_[n.b + n.d], a3 = val_[n.b + 2 * n.d];
            adj_[n.a] += g * (-2.0 * u0 * a3 - (4.0 * u1 * a2 + 2.0 * u2 * a1) / 3.0);
            adj_[n.a + n.c] += g * (-(4.0 * u0 * a2 + 2.0 * u1 * a1) / 3.0);
            adj_[n.a + 2 * n.c] += g * (-2.0 * u0 * a1 / 3.0);
            adj_[n.b] += g * (-(u1 * u1 + 2.0 * u0 * u2) / 3.0);
            adj_[n.b + n.d] += g * (-4.0 * u0 * u1 / 3.0);
            adj_[n.b + 2 * n.d] += g * (1.0 - u0 * u0);
            break;
        }
        case KDot: {
            const double* w = params_.data() + n.c;
            const double* x = val_.data() + n.a;
            double* ax = adj_.data() + n.a;
            double* gw = grad.data() + n.c;
            for (int32_t k = 0; k < n.b; ++k) {
                ax[k] += g * w[k];
                gw[k] += g * x[k];
            }
            if (n.d >= 0) grad[n.d] += g;
            break;
        }
        }
    }
}

double check_gradient_fd(const std::function<double(std::span<const double>)>& f,
                         std::span<const double> point, std::span<const double> analytic_grad,
                         double step) {
    std::vector<double> x(point.begin(), point.end());
    double worst = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double saved = x[i];
        x[i] = saved + step;
        const double fp = f(x);
        x[i] = saved - step;
        const double fm = f(x);
        x[i] = saved;
        const double fd = (fp - fm) / (2.0 * step);
        const double rel = std::abs(analytic_grad[i] - fd) / (std::abs(analytic_grad[i]) + 1e-8);
        worst = std::max(worst, rel);
    }
    return worst;
}

} // namespace rang
