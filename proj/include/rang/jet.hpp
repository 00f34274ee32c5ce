#pragma once

#include <array>

#include "rang/tape.hpp"

namespace rang {

// Degree-3 truncated Taylor expansion along one input direction, with every
// coefficient living on the gradient tape. Convention: c_k = u^(k)(0) / k!,
// so value = c0, first = c1, second = 2 c2, third = 6 c3.
struct Jet {
    Tape* tape = nullptr;
    int degree = 0;              // active degree, 0..3
    std::array<VarRef, 4> c{-1, -1, -1, -1};

    static Jet make_constant(Tape& t, double value, int degree);
    // Seeded input variable: value + delta along the direction.
    static Jet make_seed(Tape& t, double value, int degree);

    double value() const { return tape->val(c[0]); }
    double d1() const { return degree >= 1 ? tape->val(c[1]) : 0.0; }
    double d2() const { return degree >= 2 ? 2.0 * tape->val(c[2]) : 0.0; }
    double d3() const { return degree >= 3 ? 6.0 * tape->val(c[3]) : 0.0; }
};

Jet jet_add(const Jet& a, const Jet& b);
Jet jet_sub(const Jet& a, const Jet& b);
Jet jet_mul(const Jet& a, const Jet& b); // Cauchy product, truncated
Jet jet_scale(const Jet& a, double k);
Jet jet_shift(const Jet& a, double k);
Jet jet_tanh(const Jet& a);

} // namespace rang
