#include <doctest.h>

#include <cmath>

#include "rang/jet.hpp"
#include "rang/network.hpp"

using namespace rang;

TEST_CASE("jet multiplication follows the Cauchy product") {
    Tape t;
    Jet one = Jet::make_constant(t, 1.0, 3);
    Jet x = Jet::make_seed(t, 0.7, 3);
    Jet id = jet_mul(one, x);
    CHECK(id.value() == doctest::Approx(0.7));
    CHECK(id.d1() == doctest::Approx(1.0));
    CHECK(id.d2() == doctest::Approx(0.0));
    CHECK(id.d3() == doctest::Approx(0.0));

    Jet xx = jet_mul(x, x); // (x0 + d)^2
    CHECK(xx.value() == doctest::Approx(0.49));
    CHECK(xx.d1() == doctest::Approx(1.4));
    CHECK(t.val(xx.c[2]) == doctest::Approx(1.0));

    Tape t2;
    Jet y = Jet::make_seed(t2, 1.0, 3);
    Jet yyy = jet_mul(jet_mul(y, y), y); // (1 + d)^3 => coefficients 1,3,3,1
    CHECK(t2.val(yyy.c[0]) == doctest::Approx(1.0));
    CHECK(t2.val(yyy.c[1]) == doctest::Approx(3.0));
    CHECK(t2.val(yyy.c[2]) == doctest::Approx(3.0));
    CHECK(t2.val(yyy.c[3]) == doctest::Approx(1.0));
}

TEST_CASE("jet add/sub/scale/shift") {
    Tape t;
    Jet x = Jet::make_seed(t, 2.0, 2);
    Jet s = jet_add(x, jet_scale(x, 2.0)); // 3x
    CHECK(s.value() == doctest::Approx(6.0));
    CHECK(s.d1() == doctest::Approx(3.0));
    Jet d = jet_sub(jet_shift(x, 5.0), x); // constant 5
    CHECK(d.value() == doctest::Approx(5.0));
    CHECK(d.d1() == doctest::Approx(0.0));
}

TEST_CASE("jet tanh matches the Maclaurin series") {
    Tape t;
    Jet zero_seed = Jet::make_seed(t, 0.0, 3);
    Jet th = jet_tanh(zero_seed); // tanh d = d - d^3/3
    CHECK(th.value() == doctest::Approx(0.0));
    CHECK(t.val(th.c[1]) == doctest::Approx(1.0));
    CHECK(t.val(th.c[2]) == doctest::Approx(0.0));
    CHECK(t.val(th.c[3]) == doctest::Approx(-1.0 / 3.0));

    Jet c = jet_tanh(Jet::make_constant(t, 0.8, 3));
    CHECK(c.value() == doctest::Approx(std::tanh(0.8)));
    CHECK(c.d1() == doctest::Approx(0.0));
    CHECK(c.d3() == doctest::Approx(0.0));

    Jet h = jet_tanh(Jet::make_seed(t, 0.5, 1));
    const double u = std::tanh(0.5);
    CHECK(h.d1() == doctest::Approx(1.0 - u * u));
}

TEST_CASE("backward on leaves and products") {
    std::vector<double> params{2.0, 3.0};
    Tape t(params);
    VarRef a = t.leaf(0);
    std::vector<double> grad(2);
    t.backward(a, grad);
    CHECK(grad[0] == doctest::Approx(1.0));
    CHECK(grad[1] == doctest::Approx(0.0));

    VarRef b = t.leaf(1);
    t.backward(t.mul(a, b), grad);
    CHECK(grad[0] == doctest::Approx(3.0));
    CHECK(grad[1] == doctest::Approx(2.0));
}

TEST_CASE("backward matches finite differences on a composite program") {
    std::vector<double> params{0.3, -0.7, 1.2};
    auto program = [](std::span<const double> p) {
        Tape t(p);
        VarRef a = t.leaf(0), b = t.leaf(1), c = t.leaf(2);
        VarRef u = t.tanh(t.add(t.mul(a, b), t.square(c)));
        VarRef v = t.div(t.cube(a), t.affine(b, 2.0, 3.0));
        return t.val(t.add(u, t.mul(v, c)));
    };
    Tape t(params);
    VarRef a = t.leaf(0), b = t.leaf(1), c = t.leaf(2);
    VarRef u = t.tanh(t.add(t.mul(a, b), t.square(c)));
    VarRef out = t.add(u, t.mul(t.div(t.cube(a), t.affine(b, 2.0, 3.0)), c));
    std::vector<double> grad(3);
    t.backward(out, grad);
    CHECK(check_gradient_fd(program, params, grad) < 1e-4);
}

TEST_CASE("check_gradient_fd on quadratics and constants") {
    std::vector<double> params{1.5, -2.5};
    auto quad = [](std::span<const double> p) {
        Tape t(p);
        return t.val(t.add(t.square(t.leaf(0)), t.mul(t.leaf(0), t.leaf(1))));
    };
    std::vector<double> grad{2.0 * 1.5 + (-2.5), 1.5};
    CHECK(check_gradient_fd(quad, params, grad) < 1e-9);

    auto constant = [](std::span<const double>) { return 4.0; };
    std::vector<double> zero{0.0, 0.0};
    CHECK(check_gradient_fd(constant, params, zero) < 1e-12);
}

TEST_CASE("backward is linear") {
    std::vector<double> params{0.4, 0.9};
    Tape t(params);
    VarRef a = t.leaf(0), b = t.leaf(1);
    VarRef f = t.tanh(t.mul(a, b));
    VarRef g = t.square(t.add(a, b));
    VarRef combo = t.add(t.affine(f, 2.5, 0.0), t.affine(g, -1.25, 0.0));
    std::vector<double> gf(2), gg(2), gc(2);
    t.backward(f, gf);
    t.backward(g, gg);
    t.backward(combo, gc);
    for (int i = 0; i < 2; ++i)
        CHECK(gc[i] == doctest::Approx(2.5 * gf[i] - 1.25 * gg[i]).epsilon(1e-12));
}

TEST_CASE("tape replay is bitwise deterministic") {
    std::vector<double> params{0.1, 0.2, 0.3, 0.4};
    auto run = [&](std::vector<double>& grad) {
        Tape t(params);
        VarRef out = t.constant(0.0);
        for (int i = 0; i < 4; ++i) out = t.add(out, t.tanh(t.mul(t.leaf(i), t.leaf((i + 1) % 4))));
        t.forward();
        t.backward(out, grad);
        return t.val(out);
    };
    std::vector<double> g1(4), g2(4);
    const double v1 = run(g1), v2 = run(g2);
    CHECK(v1 == v2);
    for (int i = 0; i < 4; ++i) CHECK(g1[i] == g2[i]);
}

TEST_CASE("small tanh network gradient vs finite differences") {
    MlpArch arch{{2, 8, 8, 1}};
    RngStream rng(111);
    MlpParams params = init_params(arch, rng);
    const Point2 p{0.3, -0.2};

    auto f = [&](std::span<const double> theta) {
        MlpParams q{arch, {theta.begin(), theta.end()}};
        return eval_values(q, p)[0];
    };
    Tape t(params.values);
    auto dv = emit_forward_jet(t, arch, 0, p, 2, 1);
    std::vector<double> grad(params.values.size());
    t.backward(dv[0].u.v, grad);
    CHECK(check_gradient_fd(f, params.values, grad) < 1e-4);
}
