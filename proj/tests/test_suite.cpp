#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rang/suite.hpp"

using namespace rang;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SuiteSpec tiny_spec(const std::string& outdir) {
    SuiteSpec spec;
    spec.problem = "poisson";
    spec.samplers = {SamplerKind::Random, SamplerKind::RANGm};
    spec.replicates = 2;
    spec.base_seed = 7;
    spec.max_iter = 20;
    spec.interval = 10;
    spec.n_pde = 50;
    spec.outdir = outdir;
    return spec;
}

// Last finite mse column value of a run log.
double final_mse_from_csv(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line); // header
    double mse = 0.0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string field;
        for (int c = 0; c < 6; ++c) std::getline(ss, field, ',');
        const double v = std::stod(field);
        if (std::isfinite(v)) mse = v;
    }
    return mse;
}

} // namespace

TEST_CASE("quantile_linear") {
    std::vector<double> v{9, 1, 2};
    CHECK(quantile_linear(v, 0.0) == doctest::Approx(1.0));
    CHECK(quantile_linear(v, 0.5) == doctest::Approx(2.0));
    CHECK(quantile_linear(v, 1.0) == doctest::Approx(9.0));
    CHECK(quantile_linear(v, 0.25) == doctest::Approx(1.5));
    CHECK(quantile_linear(v, 0.75) == doctest::Approx(5.5));
    CHECK(quantile_linear({4.0}, 0.5) == doctest::Approx(4.0));
    CHECK_THROWS(quantile_linear({}, 0.5));
}

TEST_CASE("run_suite: stats invariants, determinism, round trip") {
    fs::remove_all("suite_a");
    fs::remove_all("suite_b");
    SuiteStats sa = run_suite(tiny_spec("suite_a"));
    SuiteStats sb = run_suite(tiny_spec("suite_b"));

    REQUIRE(sa.rows.size() == 2);
    for (const SamplerStats& r : sa.rows) {
        CHECK(r.min <= r.p25);
        CHECK(r.p25 <= r.p50);
        CHECK(r.p50 <= r.p75);
        CHECK(r.p75 <= r.max);
        CHECK(r.mean >= r.min);
        CHECK(r.mean <= r.max);
    }

    // byte-identical artifacts across identical specs
    CHECK(slurp("suite_a/poisson_stats.csv") == slurp("suite_b/poisson_stats.csv"));
    CHECK(slurp("suite_a/poisson_random_7.csv") == slurp("suite_b/poisson_random_7.csv"));
    CHECK(slurp("suite_a/poisson_rang-m_8_nodes_1.csv") ==
          slurp("suite_b/poisson_rang-m_8_nodes_1.csv"));

    // engine stats match recomputation from the per-run logs
    for (const SamplerStats& r : sa.rows) {
        std::vector<double> mses;
        for (uint64_t s = 7; s <= 8; ++s)
            mses.push_back(final_mse_from_csv("suite_a/poisson_" +
                                              std::string(sampler_name(r.sampler)) + "_" +
                                              std::to_string(s) + ".csv"));
        CHECK(r.p50 == doctest::Approx(quantile_linear(mses, 0.5)).epsilon(1e-12));
        CHECK(r.mean == doctest::Approx(0.5 * (mses[0] + mses[1])).epsilon(1e-12));
    }

    // single replicate: all six stats collapse
    SuiteSpec one = tiny_spec("suite_one");
    one.samplers = {SamplerKind::Random};
    one.replicates = 1;
    fs::remove_all("suite_one");
    SuiteStats so = run_suite(one);
    const SamplerStats& r = so.rows[0];
    CHECK(r.mean == r.min);
    CHECK(r.min == r.p25);
    CHECK(r.p25 == r.p50);
    CHECK(r.p50 == r.p75);
    CHECK(r.p75 == r.max);
}

TEST_CASE("run_suite rejects bad specs") {
    SuiteSpec bad = tiny_spec("suite_bad");
    bad.problem = "heat";
    CHECK_THROWS(run_suite(bad));
    SuiteSpec none = tiny_spec("suite_bad");
    none.samplers.clear();
    CHECK_THROWS(run_suite(none));
}

TEST_CASE("emit_plot_scripts") {
    // artifacts from the previous suite run
    REQUIRE(fs::exists("suite_a/poisson_stats.csv"));
    emit_plot_scripts("suite_a");
    CHECK(fs::exists("suite_a/plot_curves.gp"));
    CHECK(fs::exists("suite_a/plot_box.gp"));
    CHECK(fs::exists("suite_a/plot_nodes.gp"));

    // one series per sampler in the curve script
    const std::string gp = slurp("suite_a/plot_curves.gp");
    CHECK(gp.find("poisson_random_median_curve.csv") != std::string::npos);
    CHECK(gp.find("poisson_rang-m_median_curve.csv") != std::string::npos);

    // snapshot panels are ordered by resample index
    const std::string nodes_gp = slurp("suite_a/plot_nodes.gp");
    const size_t p0 = nodes_gp.find("resample 0");
    const size_t p1 = nodes_gp.find("resample 1");
    CHECK(p0 != std::string::npos);
    CHECK(p1 != std::string::npos);
    CHECK(p0 < p1);

    fs::create_directories("empty_dir");
    CHECK_THROWS_WITH_AS(emit_plot_scripts("empty_dir"), doctest::Contains("no suite artifacts"),
                         std::runtime_error);
}
