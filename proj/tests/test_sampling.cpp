#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "rang/errormap.hpp"
#include "rang/sampling.hpp"

using namespace rang;

TEST_CASE("sample_random: determinism and containment") {
    RngStream a(11), b(11);
    NodeSet one = sample_random(Rect::unit(), 1, a);
    NodeSet same = sample_random(Rect::unit(), 1, b);
    REQUIRE(one.size() == 1);
    CHECK(one.points[0].x == same.points[0].x);
    CHECK(one.points[0].y == same.points[0].y);
    CHECK(Rect::unit().contains(one.points[0]));

    RngStream c(12);
    NodeSet ns = sample_random(Rect(2, 3, -1, 1), 100, c);
    for (const Point2& p : ns.points) {
        CHECK(p.x >= 2.0);
        CHECK(p.x <= 3.0);
        CHECK(p.y >= -1.0);
        CHECK(p.y <= 1.0);
    }
}

TEST_CASE("sample_random: empirical mean") {
    RngStream rng(13);
    NodeSet ns = sample_random(Rect::unit(), 10000, rng);
    double mx = 0;
    for (const Point2& p : ns.points) mx += p.x;
    mx /= 10000.0;
    CHECK(std::abs(mx - 0.5) < 0.02);
}

namespace {
bool lhs_stratified(const NodeSet& ns, const Rect& r) {
    const size_t n = ns.size();
    std::vector<int> cx(n, 0), cy(n, 0);
    for (const Point2& p : ns.points) {
        auto bin = [n](double v, double lo, double span) {
            return std::min(static_cast<size_t>((v - lo) / span * static_cast<double>(n)), n - 1);
        };
        cx[bin(p.x, r.xmin, r.width())] += 1;
        cy[bin(p.y, r.ymin, r.height())] += 1;
    }
    auto one_each = [](const std::vector<int>& c) {
        return std::all_of(c.begin(), c.end(), [](int v) { return v == 1; });
    };
    return one_each(cx) && one_each(cy);
}
} // namespace

TEST_CASE("sample_lhs: one point per stratum on each axis") {
    RngStream rng(21);
    CHECK(lhs_stratified(sample_lhs(Rect::unit(), 4, rng), Rect::unit()));
    NodeSet single = sample_lhs(Rect::unit(), 1, rng);
    REQUIRE(single.size() == 1);
    CHECK(Rect::unit().contains(single.points[0]));
    CHECK(lhs_stratified(sample_lhs(Rect::unit(), 1000, rng), Rect::unit()));
    CHECK(lhs_stratified(sample_lhs(Rect(-3, 5, 2, 4), 50, rng), Rect(-3, 5, 2, 4)));
}

TEST_CASE("van_der_corput radical inverse") {
    CHECK(van_der_corput(1, 2) == doctest::Approx(0.5));
    CHECK(van_der_corput(3, 2) == doctest::Approx(0.75));
    CHECK(van_der_corput(5, 3) == doctest::Approx(7.0 / 9.0));
    // injective and in (0,1) over k = 1..p^m - 1
    std::set<double> seen;
    for (uint64_t k = 1; k < 64; ++k) {
        const double v = van_der_corput(k, 2);
        CHECK(v > 0.0);
        CHECK(v < 1.0);
        seen.insert(v);
    }
    CHECK(seen.size() == 63);
}

TEST_CASE("sample_hammersley: exact point sets") {
    NodeSet h4 = sample_hammersley(Rect::unit(), 4);
    REQUIRE(h4.size() == 4);
    const double expect4[4][2] = {{0.25, 0.5}, {0.5, 0.25}, {0.75, 0.75}, {1.0, 0.125}};
    for (size_t k = 0; k < 4; ++k) {
        CHECK(h4.points[k].x == doctest::Approx(expect4[k][0]).epsilon(1e-15));
        CHECK(h4.points[k].y == doctest::Approx(expect4[k][1]).epsilon(1e-15));
    }

    NodeSet h2 = sample_hammersley(Rect(0, 2, 0, 2), 2);
    REQUIRE(h2.size() == 2);
    CHECK(h2.points[0].x == doctest::Approx(1.0));
    CHECK(h2.points[0].y == doctest::Approx(1.0));
    CHECK(h2.points[1].x == doctest::Approx(2.0));
    CHECK(h2.points[1].y == doctest::Approx(0.5));

    // x strictly increasing at exactly k/n
    NodeSet h100 = sample_hammersley(Rect::unit(), 100);
    for (size_t k = 0; k < 100; ++k)
        CHECK(h100.points[k].x == doctest::Approx((k + 1) / 100.0).epsilon(1e-15));
}

TEST_CASE("hammersley beats random in star discrepancy") {
    NodeSet h = sample_hammersley(Rect::unit(), 64);
    const double dh = star_discrepancy_bruteforce(h);
    double mean_rand = 0.0;
    for (uint64_t s = 0; s < 20; ++s) {
        RngStream rng(100 + s);
        mean_rand += star_discrepancy_bruteforce(sample_random(Rect::unit(), 64, rng));
    }
    mean_rand /= 20.0;
    CHECK(dh < mean_rand);

    NodeSet h256 = sample_hammersley(Rect::unit(), 256);
    double mean_rand256 = 0.0;
    for (uint64_t s = 0; s < 20; ++s) {
        RngStream rng(200 + s);
        mean_rand256 += star_discrepancy_bruteforce(sample_random(Rect::unit(), 256, rng));
    }
    CHECK(star_discrepancy_bruteforce(h256) < mean_rand256 / 20.0);
}

TEST_CASE("star discrepancy on hand cases") {
    NodeSet corner;
    corner.points = {{1.0, 1.0}};
    CHECK(star_discrepancy_bruteforce(corner) > 0.9);

    NodeSet center;
    center.points = {{0.5, 0.5}};
    CHECK(star_discrepancy_bruteforce(center) == doctest::Approx(0.75));
}

TEST_CASE("ff_generate: local regularity, determinism, containment") {
    const double h = 0.1;
    RngStream rng(31), rng2(31);
    NodeSet ns = ff_generate(Rect::unit(), RadiusField::constant(h), rng);
    NodeSet ns2 = ff_generate(Rect::unit(), RadiusField::constant(h), rng2);
    REQUIRE(ns.size() == ns2.size());
    for (size_t i = 0; i < ns.size(); ++i) {
        CHECK(ns.points[i].x == ns2.points[i].x);
        CHECK(ns.points[i].y == ns2.points[i].y);
        CHECK(Rect::unit().contains(ns.points[i]));
    }

    size_t in_band = 0;
    for (size_t i = 0; i < ns.size(); ++i) {
        double best = 1e30;
        for (size_t j = 0; j < ns.size(); ++j)
            if (j != i) best = std::min(best, dist(ns.points[i], ns.points[j]));
        if (best >= 0.5 * h && best <= 2.0 * h) ++in_band;
    }
    CHECK(static_cast<double>(in_band) >= 0.95 * static_cast<double>(ns.size()));
}

TEST_CASE("ff_generate: seed stability and quarter-density scaling") {
    RngStream a(41), b(42);
    const size_t na = ff_generate(Rect::unit(), RadiusField::constant(0.1), a).size();
    const size_t nb = ff_generate(Rect::unit(), RadiusField::constant(0.1), b).size();
    CHECK(std::abs(static_cast<double>(na) - static_cast<double>(nb)) <=
          0.10 * static_cast<double>(na));

    RngStream c(41);
    const size_t nhalf = ff_generate(Rect::unit(), RadiusField::constant(0.05), c).size();
    const double factor = static_cast<double>(nhalf) / static_cast<double>(na);
    CHECK(factor >= 3.5);
    CHECK(factor <= 4.5);
}

TEST_CASE("ff_generate rejects a non-positive radius") {
    RngStream rng(51);
    CHECK_THROWS(ff_generate(Rect::unit(), RadiusField::from_function([](Point2) { return 0.0; }),
                             rng));
}

TEST_CASE("nn_spacing_stats") {
    NodeSet corners;
    corners.points = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    SpacingStats s = nn_spacing_stats(corners);
    CHECK(s.min == doctest::Approx(1.0));
    CHECK(s.mean == doctest::Approx(1.0));
    CHECK(s.max == doctest::Approx(1.0));

    NodeSet line;
    line.points = {{0, 0}, {0.1, 0}, {0.3, 0}};
    s = nn_spacing_stats(line);
    CHECK(s.min == doctest::Approx(0.1));
    CHECK(s.max == doctest::Approx(0.2));
    CHECK(s.mean == doctest::Approx(0.4 / 3.0));

    CHECK(nn_spacing_stats(sample_hammersley(Rect::unit(), 100)).min > 0.0);

    NodeSet single;
    single.points = {{0, 0}};
    CHECK_THROWS(nn_spacing_stats(single));
}

TEST_CASE("filter_inside") {
    RngStream rng(61);
    NodeSet ns = sample_random(Rect::unit(), 200, rng);
    NodeSet all = filter_inside(ns, [](Point2) { return true; });
    REQUIRE(all.size() == ns.size());
    for (size_t i = 0; i < ns.size(); ++i) CHECK(all.points[i].x == ns.points[i].x);
    CHECK(filter_inside(ns, [](Point2) { return false; }).size() == 0);

    RngStream rng2(62);
    NodeSet ff = ff_generate(Rect::unit(), RadiusField::constant(0.05), rng2);
    NodeSet inside = filter_inside(ff, [](Point2 p) { return sdf_lshape(p) >= 0.0; });
    const double frac = static_cast<double>(inside.size()) / static_cast<double>(ff.size());
    CHECK(frac >= 0.6);
    CHECK(frac <= 0.9);
}

TEST_CASE("NodeSet CSV round trip") {
    NodeSet ns;
    ns.points = {{0.123456789012345678, -1.5}, {2.0 / 3.0, 1e-17}};
    const std::string path = "nodeset_roundtrip.csv";
    ns.save_csv(path);
    NodeSet back = NodeSet::load_csv(path);
    REQUIRE(back.size() == 2);
    for (size_t i = 0; i < 2; ++i) {
        CHECK(back.points[i].x == ns.points[i].x);
        CHECK(back.points[i].y == ns.points[i].y);
    }
}
