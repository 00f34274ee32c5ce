#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rang/sampling.hpp"

namespace rang {

// Scalar field on a cell-centered uniform grid with nearest-neighbor lookup.
struct GridErrorMap {
    Rect rect;
    size_t nx, ny;
    std::vector<double> values; // row-major, index = j * nx + i

    GridErrorMap(const Rect& r, size_t nx_, size_t ny_, double fill = 0.0);

    double& at(size_t i, size_t j) { return values[j * nx + i]; }
    double at(size_t i, size_t j) const { return values[j * nx + i]; }

    Point2 node(size_t i, size_t j) const;

    // Rebind the same values onto the unit square (cell centers correspond
    // affinely, so nearest-neighbor lookups are preserved).
    GridErrorMap to_unit_square() const;

    // CSV snapshot: header "nx,ny,xmin,xmax,ymin,ymax" then row-major values.
    void save_csv(const std::string& path) const;
    static GridErrorMap load_csv(const std::string& path);
};

// Same grid layout, values constrained to [0,1].
using NormalizedErrorMap = GridErrorMap;

struct ArffParams {
    double beta;  // memory coefficient, in [0,1]
    double ratio; // max/min density ratio, >= 1
    double scale; // radius scale s, > 0
    double eps = 1e-12;

    void validate() const;
};

struct BisectionBounds {
    double s_low, s_up;
    double count_tol = 0.05;
    double width_tol = 0.003;

    void validate() const;
    // Brackets the ideal uniform spacing sqrt(1/n) by two orders of magnitude.
    static BisectionBounds defaults_for(size_t n_target);
};

// Value of the grid node nearest to p; ties toward the lower index,
// points outside the rect clamp to the boundary cells.
double nearest_value(const GridErrorMap& map, const Point2& p);

// ebar = max{ (|e| - inf|e|) / (sup|e| - inf|e| + eps), beta * prior }.
NormalizedErrorMap standardize_combine(const GridErrorMap& e, const NormalizedErrorMap& prior,
                                       double beta, double eps);

// h(p) = ((1 - ebar(p)) (1 - 1/sqrt(r)) + 1/sqrt(r)) * s, so h in [s/sqrt(r), s].
RadiusField radius_field_from(const NormalizedErrorMap& ebar, double ratio, double scale);

// Adaptive-refinement FF: standardize, derive the radius field, generate.
// Returns the node set and the combined error map for the next call.
std::pair<NodeSet, NormalizedErrorMap> arff(const Rect& rect, const GridErrorMap& e,
                                            const NormalizedErrorMap& prior,
                                            const ArffParams& params, RngStream& rng);

struct CalibratedResult {
    NodeSet nodes;
    NormalizedErrorMap ebar;
    double s_final;
    bool within_tol; // count within 5% of target (vs width-tolerance exit)
};

// Loose bisection on the scale s until the node count is within 5% of
// n_target or the bracket width drops below 0.003.
CalibratedResult calibrated_arff(const Rect& rect, const GridErrorMap& e,
                                 const NormalizedErrorMap& prior, double beta, double ratio,
                                 size_t n_target, const BisectionBounds& bounds, RngStream& rng);

// Signed distance to the L-shape (unit square minus its upper-right
// quadrant), positive inside.
double sdf_lshape(const Point2& p);

} // namespace rang
