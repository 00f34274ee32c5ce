#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rang/geometry.hpp"

namespace rang {

// The nine node-generation strategies benchmarked by the engine.
enum class SamplerKind {
    Random,
    RandomR,
    Hammersley,
    LHS,
    LhsR,
    FF,
    FfR,
    RANG,
    RANGm,
};

const char* sampler_name(SamplerKind k);
SamplerKind parse_sampler(const std::string& name);
bool sampler_resamples(SamplerKind k);
bool sampler_adaptive(SamplerKind k);
// Memory coefficient implied by the strategy (0.9 for RANG-m, else 0).
double sampler_beta(SamplerKind k);

// Ordered collection of 2D collocation points.
struct NodeSet {
    std::vector<Point2> points;
    uint64_t generation_seed = 0;
    SamplerKind sampler_tag = SamplerKind::Random;

    size_t size() const { return points.size(); }

    // CSV with header "x,y", 17 significant digits per coordinate.
    void save_csv(const std::string& path) const;
    static NodeSet load_csv(const std::string& path);
};

} // namespace rang
