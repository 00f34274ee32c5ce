#include "rang/jet.hpp"

#include <stdexcept>

namespace rang {

namespace {

void check_pair(const Jet& a, const Jet& b) {
    if (a.tape != b.tape) throw std::invalid_argument("jet arithmetic: tape mismatch");
    if (a.degree != b.degree) throw std::invalid_argument("jet arithmetic: degree mismatch");
}

} // namespace

Jet Jet::make_constant(Tape& t, double value, int degree) {
    Jet j{&t, degree, {}};
    j.c[0] = t.constant(value);
    for (int k = 1; k <= degree; ++k) j.c[k] = t.constant(0.0);
    return j;
}

Jet Jet::make_seed(Tape& t, double value, int degree) {
    Jet j{&t, degree, {}};
    j.c[0] = t.constant(value);
    if (degree >= 1) j.c[1] = t.constant(1.0);
    for (int k = 2; k <= degree; ++k) j.c[k] = t.constant(0.0);
    return j;
}

Jet jet_add(const Jet& a, const Jet& b) {
    check_pair(a, b);
    Jet r{a.tape, a.degree, {}};
    for (int k = 0; k <= a.degree; ++k) r.c[k] = a.tape->add(a.c[k], b.c[k]);
    return r;
}

Jet jet_sub(const Jet& a, const Jet& b) {
    check_pair(a, b);
    Jet r{a.tape, a.degree, {}};
    for (int k = 0; k <= a.degree; ++k) r.c[k] = a.tape->sub(a.c[k], b.c[k]);
    return r;
}

Jet jet_mul(const Jet& a, const Jet& b) {
    check_pair(a, b);
    Tape& t = *a.tape;
    Jet r{a.tape, a.degree, {}};
    for (int k = 0; k <= a.degree; ++k) {
        VarRef acc = t.mul(a.c[0], b.c[k]);
        for (int i = 1; i <= k; ++i) acc = t.add(acc, t.mul(a.c[i], b.c[k - i]));
        r.c[k] = acc;
    }
    return r;
}

Jet jet_scale(const Jet& a, double k) {
    Jet r{a.tape, a.degree, {}};
    for (int i = 0; i <= a.degree; ++i) r.c[i] = a.tape->affine(a.c[i], k, 0.0);
    return r;
}

Jet jet_shift(const Jet& a, double k) {
    Jet r = a;
    r.c[0] = a.tape->affine(a.c[0], 1.0, k);
    return r;
}

Jet jet_tanh(const Jet& a) {
    Tape& t = *a.tape;
    Jet r{a.tape, a.degree, {}};
    r.c[0] = t.tanh(a.c[0]);
    if (a.degree >= 1) r.c[1] = t.tanh_d1(r.c[0], a.c[1]);
    if (a.degree >= 2) {
        // (1 - u0^2) a2 - u0 u1 a1, spelled with generic nodes because the
        // operands of a free-standing jet are not laid out at a fixed stride.
        VarRef p0 = t.affine(t.square(r.c[0]), -1.0, 1.0);
        VarRef term = t.sub(t.mul(p0, a.c[2]), t.mul(t.mul(r.c[0], r.c[1]), a.c[1]));
        r.c[2] = term;
        if (a.degree >= 3) {
            VarRef p1 = t.affine(t.mul(r.c[0], r.c[1]), -2.0, 0.0);
            VarRef p2 = t.affine(t.add(t.square(r.c[1]), t.affine(t.mul(r.c[0], r.c[2]), 2.0, 0.0)),
                                 -1.0, 0.0);
            VarRef inner = t.add(t.affine(t.mul(p1, a.c[2]), 2.0, 0.0), t.mul(p2, a.c[1]));
            r.c[3] = t.add(t.mul(p0, a.c[3]), t.affine(inner, 1.0 / 3.0, 0.0));
        }
    }
    return r;
}

} // namespace rang
