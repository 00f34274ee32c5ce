#include "rang/problems.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rang {

namespace {

constexpr double kPi = std::numbers::pi;

double sech(double x) { return 1.0 / std::cosh(x); }

double equispaced(double lo, double hi, size_t n, size_t i) {
    if (n == 1) return 0.5 * (lo + hi);
    return lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(n - 1);
}

TV mean_of(Tape& t, const std::vector<TV>& terms) {
    TV acc = terms.front();
    for (size_t i = 1; i < terms.size(); ++i) acc = acc + terms[i];
    return {&t, t.affine(acc.v, 1.0 / static_cast<double>(terms.size()), 0.0)};
}

} // namespace

GridReference load_grid_reference(const std::string& path, const Rect& expected, int comps) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("reference file missing: " + path);
    std::string header;
    std::getline(in, header);
    size_t nt, nx;
    double t0, t1, x0, x1;
    int file_comps;
    if (std::sscanf(header.c_str(), "%zu,%zu,%lf,%lf,%lf,%lf,%d", &nt, &nx, &t0, &t1, &x0, &x1,
                    &file_comps) != 7)
        throw std::runtime_error(path + ": bad reference header '" + header + "'");
    if (file_comps != comps)
        throw std::runtime_error(path + ": expected " + std::to_string(comps) + " components, got " +
                                 std::to_string(file_comps));
    const double tol = 1e-9;
    if (std::abs(x0 - expected.xmin) > tol || std::abs(x1 - expected.xmax) > tol ||
        std::abs(t0 - expected.ymin) > tol || std::abs(t1 - expected.ymax) > tol) {
        std::ostringstream msg;
        msg << path << ": grid rect [" << x0 << "," << x1 << "]x[" << t0 << "," << t1
            << "] does not match problem rect [" << expected.xmin << "," << expected.xmax << "]x["
            << expected.ymin << "," << expected.ymax << "]";
        throw std::runtime_error(msg.str());
    }
    GridReference ref{Rect(x0, x1, t0, t1), nx, nt, comps, {}};
    ref.values.resize(nt * nx * static_cast<size_t>(comps));
    for (size_t k = 0; k < ref.values.size(); ++k) {
        if (!(in >> ref.values[k])) throw std::runtime_error(path + ": truncated values");
        if (!std::isfinite(ref.values[k]))
            throw std::runtime_error(path + ": non-finite value at entry " + std::to_string(k));
        // rows mix comma and newline separators; only consume an actual comma
        in >> std::ws;
        if (in.peek() == ',') in.get();
    }
    return ref;
}

double poisson_forcing(double x, double y) {
    constexpr double sigma = 0.1;
    constexpr double s2 = sigma * sigma;
    constexpr double s4 = s2 * s2;
    auto term = [&](double dx, double dy) {
        const double r2 = dx * dx + dy * dy;
        return (-2.0 * s2 + r2) / s4 * std::exp(-r2 / (2.0 * s2));
    };
    return term(x - 0.3, y - 0.3) - term(x + 0.3, y + 0.3);
}

double poisson_reference(double x, double y) {
    constexpr double s2 = 0.01;
    auto g = [&](double dx, double dy) { return std::exp(-(dx * dx + dy * dy) / (2.0 * s2)); };
    return g(x - 0.3, y - 0.3) - g(x + 0.3, y + 0.3);
}

double wave_reference(double t, double x) {
    constexpr double l = 4.0;
    const double r3 = std::sqrt(3.0);
    return 0.5 * sech(2.0 * (x + r3 * t)) - 0.5 * sech(2.0 * (x - 2.0 * l + r3 * t)) +
           0.5 * sech(2.0 * (x - r3 * t)) - 0.5 * sech(2.0 * (x + 2.0 * l - r3 * t));
}

double allen_cahn_ic(double x) { return x * x * std::cos(kPi * x); }

std::vector<double> schrodinger_ic(double x) { return {2.0 * sech(x), 0.0}; }

double kdv_reference(double t, double x) {
    constexpr double c = 7.0;
    const double w = 0.5 * std::sqrt(c) * (x - c * t + 7.0);
    const double s = sech(w);
    return 0.5 * c * s * s;
}

double convdiff_reference(double t, double x) {
    constexpr double mu = 0.05;
    const double tau = t + 0.1;
    const double xi = x + 2.0 - 4.0 * t;
    return 0.1 / std::sqrt(mu * tau) * std::exp(-xi * xi / (4.0 * mu * tau));
}

PdeProblem allen_cahn(std::shared_ptr<GridReference> ref, bool printed_ic_slope_term) {
    PdeProblem p;
    p.name = "allen-cahn";
    p.domain = Rect(-1.0, 1.0, 0.0, 1.0);
    p.n_comps = 1;
    p.x_deg = 2;
    p.y_deg = 1;
    p.residual_sq_num = [](std::span<const DV<double>> d, Point2) {
        return allen_cahn_residual_sq(d[0]);
    };
    p.residual_sq_tape = [](std::span<const DV<TV>> d, Point2) {
        return allen_cahn_residual_sq(d[0]);
    };
    p.ic_loss = [printed_ic_slope_term](Tape& t, const NetEvalT& eval, size_t n) {
        std::vector<TV> terms;
        for (size_t i = 0; i < n; ++i) {
            const double x = equispaced(-1.0, 1.0, n, i);
            auto d = eval({x, 0.0}, printed_ic_slope_term ? 1 : 0, 0);
            TV term = sq(d[0].u - allen_cahn_ic(x));
            if (printed_ic_slope_term) term = term + sq(d[0].ux);
            terms.push_back(term);
        }
        return mean_of(t, terms);
    };
    p.bc_loss = [](Tape& t, const NetEvalT& eval, size_t n) {
        std::vector<TV> terms;
        for (size_t i = 0; i < n; ++i) {
            const double tb = equispaced(0.0, 1.0, n, i);
            auto dl = eval({-1.0, tb}, 0, 0);
            auto dr = eval({1.0, tb}, 0, 0);
            terms.push_back(sq(dl[0].u + 1.0) + sq(dr[0].u + 1.0));
        }
        return mean_of(t, terms);
    };
    p.ref_grid = std::move(ref);
    p.defaults = {1000, 50000, 1000, 30};
    return p;
}

PdeProblem wave1d() {
    PdeProblem p;
    p.name = "wave";
    p.domain = Rect(-4.0, 4.0, 0.0, 6.0);
    p.n_comps = 1;
    p.x_deg = 2;
    p.y_deg = 2;
    p.residual_sq_num = [](std::span<const DV<double>> d, Point2) { return wave_residual_sq(d[0]); };
    p.residual_sq_tape = [](std::span<const DV<TV>> d, Point2) { return wave_residual_sq(d[0]); };
    p.ic_loss = [](Tape& t, const NetEvalT& eval, size_t n) {
        std::vector<TV> terms;
        for (size_t i = 0; i < n; ++i) {
            const double x = equispaced(-4.0, 4.0, n, i);
            auto d = eval({x, 0.0}, 0, 1);
            // initial displacement and zero initial velocity
            terms.push_back(sq(d[0].u - wave_reference(0.0, x)) + sq(d[0].ut));
        }
        return mean_of(t, terms);
    };
    p.bc_loss = [](Tape& t, const NetEvalT& eval, size_t n) {
        std::vector<TV> terms;
        for (size_t i = 0; i < n; ++i) {
            const double tb = equispaced(0.0, 6.0, n, i);
            auto dl = eval({-4.0, tb}, 0, 0);
            auto dr = eval({4.0, tb}, 0, 0);
            terms.push_back(sq(dl[0].u) + sq(dr[0].u));
        }
        return mean_of(t, terms);
    };
    p.reference = [](Point2 q) { return std::vector<double>{wave_reference(q.y, q.x)}; };
    p.defaults = {1000, 15000, 1000, 50};
    return p;
}

PdeProblem schrodinger1d(std::shared_ptr<GridReference> ref) {
    PdeProblem p;
    p.name = "schrodinger";
    p.domain = Rect(-5.0, 5.0, 0.0, 0.5 * kPi);
    p.n_comps = 2;
    p.x_deg = 2;
    p.y_deg = 1;
    p.residual_sq_num = [](std::span<const DV<double>> d, Point2) {
        return schrodinger_residual_sq(d[0], d[1]);
    };
    p.residual_sq_tape = [](std::span<const DV<TV>> d, Point2) {
        return schrodinger_residual_sq(d[0], d[1]);
    };
    p.ic_loss = [](Tape& t, const NetEvalT& eval, size_t n) {
        std::vector<TV> terms;
        for (size_t i = 0; i < n; ++i) {
            const double x = equispaced(-5.0, 5.0, n, i);
            auto d = eval({x, 0.0}, 0, 0);
            terms.push_back(sq(d[0].u - 2.0 * sech(x)) + sq(d[1].u));
        }
        return mean_of(t, terms);
    };
    p.bc_loss = [](Tape& t, const NetEvalT& eval, size_t n) {
        std::vector<TV> terms;
        for (size_t i = 0; i < n; ++i) {
            const double tb = equispaced(0.0, 0.5 * kPi, n, i);
            auto dl = eval({-5.0, tb}, 1, 0);
            auto dr = eval({5.0, tb}, 1, 0);
            // periodic value and slope for both components
            terms.push_back(sq(dl[0].u - dr[0].u) + sq(dl[1].u - dr[1].u) +
                            sq(dl[0].ux - dr[0].ux) + sq(dl[1].ux - dr[1].ux));
        }
        return mean_of(t, terms);
    };
    p.ref_grid = std::move(ref);
    p.defaults = {1000, 50000, 1000, 30};
    return p;
}

PdeProblem kdv() {
    PdeProblem p;
    p.name = "kdv";
    p.domain = Rect(-4.0 * kPi, 4.0 * kPi, 0.0, 2.0);
    p.n_comps = 1;
    p.x_deg = 3;
    p.y_deg = 1;
    p.residual_sq_num = [](std::span<const DV<double>> d, Point2) { return kdv_residual_sq(d[0]); };
    p.residual_sq_tape = [](std::span<const DV<TV>> d, Point2) { return kdv_residual_sq(d[0]); };
    p.ic_loss = [](Tape& t, const NetEvalT& eval, size_t n) {
        std::vector<TV> terms;
        for (size_t i = 0; i < n; ++i) {
            const double x = equispaced(-4.0 * kPi, 4.0 * kPi, n, i);
            auto d = eval({x, 0.0}, 0, 0);
            terms.push_back(sq(d[0].u - kdv_reference(0.0, x)));
        }
        return mean_of(t, terms);
    };
    p.bc_loss = [](Tape& t, const NetEvalT& eval, size_t n) {
        std::vector<TV> terms;
        for (size_t i = 0; i < n; ++i) {
            const double tb = equispaced(0.0, 2.0, n, i);
            auto dl = eval({-4.0 * kPi, tb}, 0, 0);
            auto dr = eval({4.0 * kPi, tb}, 0, 0);
            terms.push_back(sq(dl[0].u) + sq(dr[0].u));
        }
        return mean_of(t, terms);
    };
    p.reference = [](Point2 q) { return std::vector<double>{kdv_reference(q.y, q.x)}; };
    p.defaults = {1000, 50000, 1000, 50};
    return p;
}

PdeProblem poisson2d() {
    PdeProblem p;
    p.name = "poisson";
    p.domain = Rect(-1.0, 1.0, -1.0, 1.0);
    p.n_comps = 1;
    p.x_deg = 2;
    p.y_deg = 2;
    p.has_ic = false;
    p.residual_sq_num = [](std::span<const DV<double>> d, Point2 q) {
        return poisson_residual_sq(d[0], q);
    };
    p.residual_sq_tape = [](std::span<const DV<TV>> d, Point2 q) {
        return poisson_residual_sq(d[0], q);
    };
    p.bc_loss = [](Tape& t, const NetEvalT& eval, size_t n) {
        std::vector<TV> terms;
        for (size_t i = 0; i < n; ++i) {
            const double s = equispaced(-1.0, 1.0, n, i);
            auto db = eval({s, -1.0}, 0, 0);
            auto dt = eval({s, 1.0}, 0, 0);
            auto dl = eval({-1.0, s}, 0, 0);
            auto dr = eval({1.0, s}, 0, 0);
            TV sum = sq(db[0].u) + sq(dt[0].u) + sq(dl[0].u) + sq(dr[0].u);
            terms.push_back({&t, t.affine(sum.v, 0.25, 0.0)});
        }
        return mean_of(t, terms);
    };
    p.reference = [](Point2 q) { return std::vector<double>{poisson_reference(q.x, q.y)}; };
    p.defaults = {400, 3000, 100, 100};
    return p;
}

PdeProblem convection_diffusion() {
    PdeProblem p;
    p.name = "conv-diff";
    p.domain = Rect(-4.0, 4.0, 0.0, 1.0);
    p.n_comps = 1;
    p.x_deg = 2;
    p.y_deg = 1;
    p.residual_sq_num = [](std::span<const DV<double>> d, Point2) {
        return convdiff_residual_sq(d[0]);
    };
    p.residual_sq_tape = [](std::span<const DV<TV>> d, Point2) {
        return convdiff_residual_sq(d[0]);
    };
    p.ic_loss = [](Tape& t, const NetEvalT& eval, size_t n) {
        std::vector<TV> terms;
        for (size_t i = 0; i < n; ++i) {
            const double x = equispaced(-4.0, 4.0, n, i);
            auto d = eval({x, 0.0}, 0, 0);
            terms.push_back(sq(d[0].u - convdiff_reference(0.0, x)));
        }
        return mean_of(t, terms);
    };
    p.bc_loss = [](Tape& t, const NetEvalT& eval, size_t n) {
        std::vector<TV> terms;
        for (size_t i = 0; i < n; ++i) {
            const double tb = equispaced(0.0, 1.0, n, i);
            auto dl = eval({-4.0, tb}, 0, 0);
            auto dr = eval({4.0, tb}, 0, 0);
            terms.push_back(sq(dl[0].u) + sq(dr[0].u));
        }
        return mean_of(t, terms);
    };
    p.reference = [](Point2 q) { return std::vector<double>{convdiff_reference(q.y, q.x)}; };
    p.defaults = {1000, 10000, 1000, 60};
    return p;
}

PdeProblem problem_by_name(const std::string& name, const std::string& ref_path) {
    if (name == "allen-cahn") {
        std::shared_ptr<GridReference> ref;
        if (!ref_path.empty())
            ref = std::make_shared<GridReference>(
                load_grid_reference(ref_path, Rect(-1.0, 1.0, 0.0, 1.0), 1));
        return allen_cahn(ref);
    }
    if (name == "wave") return wave1d();
    if (name == "schrodinger") {
        std::shared_ptr<GridReference> ref;
        if (!ref_path.empty())
            ref = std::make_shared<GridReference>(
                load_grid_reference(ref_path, Rect(-5.0, 5.0, 0.0, 0.5 * kPi), 2));
        return schrodinger1d(ref);
    }
    if (name == "kdv") return kdv();
    if (name == "poisson") return poisson2d();
    if (name == "conv-diff") return convection_diffusion();
    throw std::invalid_argument("unknown problem: " + name);
}

} // namespace rang
