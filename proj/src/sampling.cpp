#include "rang/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rang {

const char* sampler_name(SamplerKind k) {
    switch (k) {
    case SamplerKind::Random: return "random";
    case SamplerKind::RandomR: return "random-r";
    case SamplerKind::Hammersley: return "hammersley";
    case SamplerKind::LHS: return "lhs";
    case SamplerKind::LhsR: return "lhs-r";
    case SamplerKind::FF: return "ff";
    case SamplerKind::FfR: return "ff-r";
    case SamplerKind::RANG: return "rang";
    case SamplerKind::RANGm: return "rang-m";
    }
    return "?";
}

SamplerKind parse_sampler(const std::string& name) {
    for (auto k : {SamplerKind::Random, SamplerKind::RandomR, SamplerKind::Hammersley,
                   SamplerKind::LHS, SamplerKind::LhsR, SamplerKind::FF, SamplerKind::FfR,
                   SamplerKind::RANG, SamplerKind::RANGm}) {
        if (name == sampler_name(k)) return k;
    }
    throw std::invalid_argument("unknown sampler: " + name);
}

bool sampler_resamples(SamplerKind k) {
    switch (k) {
    case SamplerKind::RandomR:
    case SamplerKind::LhsR:
    case SamplerKind::FfR:
    case SamplerKind::RANG:
    case SamplerKind::RANGm: return true;
    default: return false;
    }
}

bool sampler_adaptive(SamplerKind k) {
    return k == SamplerKind::RANG || k == SamplerKind::RANGm;
}

double sampler_beta(SamplerKind k) { return k == SamplerKind::RANGm ? 0.9 : 0.0; }

void NodeSet::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "x,y\n";
    char buf[80];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.x, p.y);
        out << buf;
    }
}

NodeSet NodeSet::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,y", 0) != 0)
        throw std::runtime_error(path + ": expected 'x,y' header");
    NodeSet ns;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Point2 p;
        if (std::sscanf(line.c_str(), "%lf,%lf", &p.x, &p.y) != 2)
            throw std::runtime_error(path + ": bad row '" + line + "'");
        ns.points.push_back(p);
    }
    return ns;
}

RadiusField RadiusField::constant(double h) {
    if (!(h > 0)) throw std::invalid_argument("RadiusField: constant radius must be positive");
    return RadiusField([h](Point2) { return h; });
}

RadiusField RadiusField::from_function(std::function<double(Point2)> f) {
    return RadiusField(std::move(f));
}

NodeSet sample_random(const Rect& rect, size_t n, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("sample_random: n >= 1 required");
    NodeSet ns;
    ns.generation_seed = rng.seed();
    ns.sampler_tag = SamplerKind::Random;
    ns.points.reserve(n);
    for (size_t i = 0; i < n; ++i)
        ns.points.push_back(rect.from_unit({rng.uniform(), rng.uniform()}));
    return ns;
}

NodeSet sample_lhs(const Rect& rect, size_t n, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("sample_lhs: n >= 1 required");
    std::vector<size_t> perm_x(n), perm_y(n);
    std::iota(perm_x.begin(), perm_x.end(), size_t{0});
    std::iota(perm_y.begin(), perm_y.end(), size_t{0});
    // Fisher-Yates with our own stream for cross-platform determinism.
    for (size_t i = n; i > 1; --i) {
        std::swap(perm_x[i - 1], perm_x[rng.below(i)]);
        std::swap(perm_y[i - 1], perm_y[rng.below(i)]);
    }
    NodeSet ns;
    ns.generation_seed = rng.seed();
    ns.sampler_tag = SamplerKind::LHS;
    ns.points.reserve(n);
    const double w = 1.0 / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) {
        const double ux = (static_cast<double>(perm_x[i]) + rng.uniform()) * w;
        const double uy = (static_cast<double>(perm_y[i]) + rng.uniform()) * w;
        ns.points.push_back(rect.from_unit({ux, uy}));
    }
    return ns;
}

double van_der_corput(uint64_t k, unsigned p) {
    if (k < 1 || p < 2) throw std::invalid_argument("van_der_corput: k >= 1 and p >= 2 required");
    double inv_base = 1.0 / static_cast<double>(p);
    double f = inv_base;
    double r = 0.0;
    while (k > 0) {
        r += f * static_cast<double>(k % p);
        k /= p;
        f *= inv_base;
    }
    return r;
}

NodeSet sample_hammersley(const Rect& rect, size_t n, unsigned p) {
    if (n < 1) throw std::invalid_argument("sample_hammersley: n >= 1 required");
    NodeSet ns;
    ns.sampler_tag = SamplerKind::Hammersley;
    ns.points.reserve(n);
    for (size_t k = 1; k <= n; ++k) {
        const double ux = static_cast<double>(k) / static_cast<double>(n);
        ns.points.push_back(rect.from_unit({ux, van_der_corput(k, p)}));
    }
    return ns;
}

namespace {

struct Candidate {
    Point2 p;
    bool alive = true;
};

} // namespace

NodeSet ff_generate(const Rect& rect, const RadiusField& h, RngStream& rng) {
    auto radius_at = [&](const Point2& p) {
        const double r = h(p);
        if (!(r > 0) || !std::isfinite(r))
            throw std::runtime_error("ff_generate: radius field must be positive and finite");
        return r;
    };

    std::vector<Candidate> cand;
    // Bottom row: advance by the local radius, jitter y upward by up to 1% of h.
    for (double x = rect.xmin; x <= rect.xmax;) {
        const double hx = radius_at({x, rect.ymin});
        const double jitter = (1.0 - rng.uniform()) * 0.01 * hx; // in (0, 0.01 h]
        cand.push_back({{x, rect.ymin + jitter}, true});
        x += hx;
    }

    NodeSet ns;
    ns.generation_seed = rng.seed();
    ns.sampler_tag = SamplerKind::FF;

    size_t n_alive = cand.size();
    while (n_alive > 0) {
        // Lowest surviving candidate.
        size_t idx = 0;
        double best_y = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < cand.size(); ++i) {
            if (cand[i].alive && cand[i].p.y < best_y) {
                best_y = cand[i].p.y;
                idx = i;
            }
        }
        const Point2 p = cand[idx].p;
        if (p.y > rect.ymax) break;
        ns.points.push_back(p);

        const double hp = radius_at(p);
        for (auto& c : cand) {
            if (c.alive && dist(c.p, p) < hp) {
                c.alive = false;
                --n_alive;
            }
        }

        // Nearest surviving neighbors to the left and right of p.
        double dl = std::numeric_limits<double>::infinity();
        double dr = std::numeric_limits<double>::infinity();
        Point2 left{}, right{};
        bool has_left = false, has_right = false;
        for (const auto& c : cand) {
            if (!c.alive) continue;
            const double d = dist(c.p, p);
            if (c.p.x < p.x && d < dl) { dl = d; left = c.p; has_left = true; }
            if (c.p.x > p.x && d < dr) { dr = d; right = c.p; has_right = true; }
        }

        // Angles measured from +x; wrap into (-pi/2, 3pi/2) so the left
        // direction sits near pi even when the neighbor dips below p.
        auto wrap = [](double a) { return a < -std::numbers::pi / 2 ? a + 2 * std::numbers::pi : a; };
        const double th_left = has_left ? wrap(std::atan2(left.y - p.y, left.x - p.x)) : std::numbers::pi;
        const double th_right = has_right ? wrap(std::atan2(right.y - p.y, right.x - p.x)) : 0.0;
        if (th_left <= th_right) continue;

        // 5 arc points equispaced strictly between the neighbor directions.
        for (int j = 1; j <= 5; ++j) {
            const double th = th_right + static_cast<double>(j) * (th_left - th_right) / 6.0;
            const Point2 q{p.x + hp * std::cos(th), p.y + hp * std::sin(th)};
            if (q.x < rect.xmin || q.x > rect.xmax || q.y < rect.ymin) continue;
            cand.push_back({q, true});
            ++n_alive;
        }

        // Periodic compaction keeps the linear scans proportional to the front.
        if (cand.size() > 4 * n_alive + 64) {
            std::erase_if(cand, [](const Candidate& c) { return !c.alive; });
        }
    }
    return ns;
}

SpacingStats nn_spacing_stats(const NodeSet& ns) {
    const size_t n = ns.points.size();
    if (n < 2) throw std::invalid_argument("nn_spacing_stats: need at least 2 points");
    double mn = std::numeric_limits<double>::infinity();
    double mx = 0.0, sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            best = std::min(best, dist(ns.points[i], ns.points[j]));
        }
        mn = std::min(mn, best);
        mx = std::max(mx, best);
        sum += best;
    }
    return {mn, sum / static_cast<double>(n), mx};
}

double star_discrepancy_bruteforce(const NodeSet& ns) {
    const size_t n = ns.points.size();
    if (n == 0) return 1.0;
    for (const auto& p : ns.points)
        if (p.x < 0 || p.x > 1 || p.y < 0 || p.y > 1)
            throw std::invalid_argument("star_discrepancy_bruteforce: points must lie in [0,1]^2");

    std::vector<double> xs, ys;
    xs.reserve(n + 1);
    ys.reserve(n + 1);
    for (const auto& p : ns.points) { xs.push_back(p.x); ys.push_back(p.y); }
    xs.push_back(1.0);
    ys.push_back(1.0);
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    const double inv_n = 1.0 / static_cast<double>(n);
    double disc = 0.0;
    for (double cx : xs) {
        for (double cy : ys) {
            size_t closed = 0, open = 0;
            for (const auto& p : ns.points) {
                if (p.x <= cx && p.y <= cy) ++closed;
                if (p.x < cx && p.y < cy) ++open;
            }
            const double area = cx * cy;
            disc = std::max(disc, static_cast<double>(closed) * inv_n - area);
            disc = std::max(disc, area - static_cast<double>(open) * inv_n);
        }
    }
    return disc;
}

NodeSet filter_inside(const NodeSet& ns, const std::function<bool(Point2)>& inside) {
    NodeSet out;
    out.generation_seed = ns.generation_seed;
    out.sampler_tag = ns.sampler_tag;
    for (const auto& p : ns.points)
        if (inside(p)) out.points.push_back(p);
    return out;
}

} // namespace rang
