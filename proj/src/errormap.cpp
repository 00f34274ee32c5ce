#include "rang/errormap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <stdexcept>

namespace rang {

GridErrorMap::GridErrorMap(const Rect& r, size_t nx_, size_t ny_, double fill)
    : rect(r), nx(nx_), ny(ny_), values(nx_ * ny_, fill) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("GridErrorMap: nx, ny >= 2 required");
}

Point2 GridErrorMap::node(size_t i, size_t j) const {
    const double dx = rect.width() / static_cast<double>(nx);
    const double dy = rect.height() / static_cast<double>(ny);
    return {rect.xmin + (static_cast<double>(i) + 0.5) * dx,
            rect.ymin + (static_cast<double>(j) + 0.5) * dy};
}

GridErrorMap GridErrorMap::to_unit_square() const {
    GridErrorMap out(Rect::unit(), nx, ny);
    out.values = values;
    return out;
}

void GridErrorMap::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g,%.17g,%.17g,%.17g\n", nx, ny, rect.xmin,
                  rect.xmax, rect.ymin, rect.ymax);
    out << buf;
    for (size_t j = 0; j < ny; ++j) {
        for (size_t i = 0; i < nx; ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g%c", at(i, j), i + 1 == nx ? '\n' : ',');
            out << buf;
        }
    }
}

GridErrorMap GridErrorMap::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    size_t nx, ny;
    double x0, x1, y0, y1;
    std::string header;
    std::getline(in, header);
    if (std::sscanf(header.c_str(), "%zu,%zu,%lf,%lf,%lf,%lf", &nx, &ny, &x0, &x1, &y0, &y1) != 6)
        throw std::runtime_error(path + ": bad grid header");
    GridErrorMap map(Rect(x0, x1, y0, y1), nx, ny);
    for (size_t k = 0; k < nx * ny; ++k) {
        if (!(in >> map.values[k])) throw std::runtime_error(path + ": truncated values");
        // rows mix comma and newline separators; only consume an actual comma
        in >> std::ws;
        if (in.peek() == ',') in.get();
    }
    return map;
}

void ArffParams::validate() const {
    if (beta < 0 || beta > 1) throw std::invalid_argument("ArffParams: beta in [0,1] required");
    if (ratio < 1) throw std::invalid_argument("ArffParams: ratio >= 1 required");
    if (!(scale > 0)) throw std::invalid_argument("ArffParams: scale > 0 required");
    if (!(eps > 0)) throw std::invalid_argument("ArffParams: eps > 0 required");
}

void BisectionBounds::validate() const {
    if (!(s_low > 0) || !(s_low < s_up))
        throw std::invalid_argument("BisectionBounds: 0 < s_low < s_up required");
}

BisectionBounds BisectionBounds::defaults_for(size_t n_target) {
    const double ideal = std::sqrt(1.0 / static_cast<double>(n_target));
    return {0.2 * ideal, 20.0 * ideal};
}

double nearest_value(const GridErrorMap& map, const Point2& p) {
    auto index = [](double v, double lo, double span, size_t n) -> size_t {
        double u = (v - lo) / span * static_cast<double>(n);
        if (u <= 0) return 0;
        // Cell midlines sit at integer u; break the tie toward the lower cell.
        double f = std::floor(u);
        size_t i = (u == f) ? static_cast<size_t>(f) - 1 : static_cast<size_t>(f);
        return std::min(i, n - 1);
    };
    const size_t i = index(p.x, map.rect.xmin, map.rect.width(), map.nx);
    const size_t j = index(p.y, map.rect.ymin, map.rect.height(), map.ny);
    return map.at(i, j);
}

NormalizedErrorMap standardize_combine(const GridErrorMap& e, const NormalizedErrorMap& prior,
                                       double beta, double eps) {
    if (e.nx != prior.nx || e.ny != prior.ny)
        throw std::invalid_argument("standardize_combine: grid shape mismatch");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : e.values) {
        const double a = std::abs(v);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    NormalizedErrorMap out(e.rect, e.nx, e.ny);
    const double inv = 1.0 / (hi - lo + eps);
    for (size_t k = 0; k < e.values.size(); ++k)
        out.values[k] = std::max((std::abs(e.values[k]) - lo) * inv, beta * prior.values[k]);
    return out;
}

RadiusField radius_field_from(const NormalizedErrorMap& ebar, double ratio, double scale) {
    if (ratio < 1 || !(scale > 0))
        throw std::invalid_argument("radius_field_from: ratio >= 1 and scale > 0 required");
    const double inv_sqrt_r = 1.0 / std::sqrt(ratio);
    auto grid = std::make_shared<NormalizedErrorMap>(ebar);
    return RadiusField::from_function([grid, inv_sqrt_r, scale](Point2 p) {
        const double eb = nearest_value(*grid, p);
        return ((1.0 - eb) * (1.0 - inv_sqrt_r) + inv_sqrt_r) * scale;
    });
}

std::pair<NodeSet, NormalizedErrorMap> arff(const Rect& rect, const GridErrorMap& e,
                                            const NormalizedErrorMap& prior,
                                            const ArffParams& params, RngStream& rng) {
    params.validate();
    NormalizedErrorMap ebar = standardize_combine(e, prior, params.beta, params.eps);
    NodeSet ns = ff_generate(rect, radius_field_from(ebar, params.ratio, params.scale), rng);
    return {std::move(ns), std::move(ebar)};
}

CalibratedResult calibrated_arff(const Rect& rect, const GridErrorMap& e,
                                 const NormalizedErrorMap& prior, double beta, double ratio,
                                 size_t n_target, const BisectionBounds& bounds, RngStream& rng) {
    bounds.validate();
    if (n_target < 10) throw std::invalid_argument("calibrated_arff: n_target >= 10 required");
    // Every bisection trial replays the same stream so the generated count
    // is a (statistically) monotone function of s alone.
    const uint64_t trial_seed = rng.next_u64();
    double lo = bounds.s_low, hi = bounds.s_up;
    const double target = static_cast<double>(n_target);

    ArffParams params{beta, ratio, 0.5 * (lo + hi)};
    for (;;) {
        RngStream trial_rng(trial_seed);
        params.scale = 0.5 * (lo + hi);
        auto [nodes, ebar] = arff(rect, e, prior, params, trial_rng);
        const double count = static_cast<double>(nodes.size());
        const bool ok = std::abs(count - target) / target <= bounds.count_tol;
        if (!ok) {
            if (count < target)
                hi = params.scale; // too sparse: shrink the radius
            else
                lo = params.scale;
        }
        if (ok || hi - lo < bounds.width_tol)
            return {std::move(nodes), std::move(ebar), params.scale, ok};
    }
}

namespace {

// Signed distance to an axis-aligned box, positive inside.
double sdf_box(const Point2& p, double x0, double x1, double y0, double y1) {
    const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    const double ex = 0.5 * (x1 - x0), ey = 0.5 * (y1 - y0);
    const double qx = std::abs(p.x - cx) - ex;
    const double qy = std::abs(p.y - cy) - ey;
    const double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
    const double inside = std::min(std::max(qx, qy), 0.0);
    return -(outside + inside);
}

} // namespace

double sdf_lshape(const Point2& p) {
    // Union of the bottom half and the left half of the unit square.
    return std::max(sdf_box(p, 0.0, 1.0, 0.0, 0.5), sdf_box(p, 0.0, 0.5, 0.0, 1.0));
}

} // namespace rang
