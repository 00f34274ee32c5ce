#pragma once

#include <functional>

#include "rang/nodeset.hpp"
#include "rang/rng.hpp"

namespace rang {

// Spatially varying target spacing for the advancing-front generator.
// Must evaluate strictly positive everywhere in the generation rect.
class RadiusField {
public:
    static RadiusField constant(double h);
    static RadiusField from_function(std::function<double(Point2)> f);

    double operator()(const Point2& p) const { return eval_(p); }

private:
    explicit RadiusField(std::function<double(Point2)> f) : eval_(std::move(f)) {}
    std::function<double(Point2)> eval_;
};

struct SpacingStats {
    double min, mean, max;
};

// i.i.d. uniform points in rect.
NodeSet sample_random(const Rect& rect, size_t n, RngStream& rng);

// Latin hypercube: one point per axis stratum.
NodeSet sample_lhs(const Rect& rect, size_t n, RngStream& rng);

// Base-p radical inverse (digit reversal) of k; value in (0,1).
double van_der_corput(uint64_t k, unsigned p);

// Deterministic Hammersley set {(k/n, phi_p(k))} mapped into rect.
NodeSet sample_hammersley(const Rect& rect, size_t n, unsigned p = 2);

// Advancing-front node generation with a variable radius field.
// Commits the lowest candidate, prunes candidates within h, and spawns 5
// arc points between the surviving left and right neighbors.
NodeSet ff_generate(const Rect& rect, const RadiusField& h, RngStream& rng);

// Exact nearest-neighbor distance statistics, brute force.
SpacingStats nn_spacing_stats(const NodeSet& ns);

// Star discrepancy over anchored boxes, exact enumeration at point
// coordinates. Oracle-scale only (O(n^3)); points must lie in [0,1]^2.
double star_discrepancy_bruteforce(const NodeSet& ns);

// Order-preserving subset where the predicate holds.
NodeSet filter_inside(const NodeSet& ns, const std::function<bool(Point2)>& inside);

} // namespace rang
