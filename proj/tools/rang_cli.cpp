#include <cstdio>
#include <filesystem>
#include <fstream>

#include <CLI11.hpp>

#include "rang/suite.hpp"

using namespace rang;

namespace {

std::vector<SamplerKind> parse_sampler_list(const std::string& arg) {
    std::vector<SamplerKind> out;
    if (arg == "all") {
        for (int k = 0; k <= static_cast<int>(SamplerKind::RANGm); ++k)
            out.push_back(static_cast<SamplerKind>(k));
        return out;
    }
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_sampler(tok));
    return out;
}

// Reduced iteration/replicate budget for a desk-class machine; `paper` keeps
// the problem's full table settings.
void apply_preset(SuiteSpec& spec, const PdeProblem& problem, const std::string& preset) {
    spec.replicates = problem.defaults.replicates;
    if (preset == "paper") return;
    if (preset != "desk") throw CLI::ValidationError("--preset must be desk or paper");
    if (spec.problem == "poisson") {
        spec.replicates = 5; // full iteration budget, fewer replicates
    } else if (spec.problem == "wave") {
        spec.replicates = 3;
    } else {
        spec.replicates = 3;
        spec.max_iter = problem.defaults.max_iter / 10;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collocation-node generation and PINN training benchmark"};
    app.require_subcommand(1);

    // run: one training run
    auto* run_cmd = app.add_subcommand("run", "Single training run");
    std::string problem_name, sampler_arg, outdir = ".", ref_path;
    uint64_t seed = 1;
    size_t iters = 0, interval = 0, n_pde = 0;
    run_cmd->add_option("--problem", problem_name, "Problem name")->required();
    run_cmd->add_option("--sampler", sampler_arg, "Sampler name")->required();
    run_cmd->add_option("--seed", seed, "Random seed");
    run_cmd->add_option("--iters", iters, "Iteration count override");
    run_cmd->add_option("--interval", interval, "Resampling interval override");
    run_cmd->add_option("--n-pde", n_pde, "Collocation node count override");
    run_cmd->add_option("--ref", ref_path, "Reference grid CSV (allen-cahn, schrodinger)");
    run_cmd->add_option("--out", outdir, "Output directory");

    // suite: replicated benchmark
    auto* suite_cmd = app.add_subcommand("suite", "Replicated benchmark over samplers");
    std::string samplers_arg = "all", preset = "paper";
    size_t replicates = 0;
    suite_cmd->add_option("--problem", problem_name, "Problem name")->required();
    suite_cmd->add_option("--samplers", samplers_arg, "all or comma-separated names");
    suite_cmd->add_option("--replicates", replicates, "Replicate count override");
    suite_cmd->add_option("--preset", preset, "desk or paper");
    suite_cmd->add_option("--seed", seed, "Base seed");
    suite_cmd->add_option("--iters", iters, "Iteration count override");
    suite_cmd->add_option("--interval", interval, "Resampling interval override");
    suite_cmd->add_option("--n-pde", n_pde, "Collocation node count override");
    suite_cmd->add_option("--ref", ref_path, "Reference grid CSV");
    suite_cmd->add_option("--out", outdir, "Output directory");

    // nodes: L-shape node-generation demo
    auto* nodes_cmd = app.add_subcommand("nodes", "Node-generation demo");
    std::string demo = "lshape";
    std::vector<double> ratios{10.0, 100.0}, scales{0.04, 0.08};
    nodes_cmd->add_option("--demo", demo, "Demo name (lshape)");
    nodes_cmd->add_option("--r", ratios, "Density ratio values");
    nodes_cmd->add_option("--s", scales, "Radius scale values");
    nodes_cmd->add_option("--out", outdir, "Output directory");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run_cmd) {
            const PdeProblem problem = problem_by_name(problem_name, ref_path);
            TrainConfig cfg = TrainConfig::for_problem(problem, seed);
            if (iters) cfg.max_iter = iters;
            if (interval) cfg.interval = interval;
            if (n_pde) cfg.n_pde = n_pde;
            const SamplerKind sampler = parse_sampler(sampler_arg);
            TrainResult result = train(problem, cfg, sampler);
            save_train_result(result, outdir, problem_name, sampler, seed);
            std::printf("%s %s seed=%llu: final MSE %.6g%s\n", problem_name.c_str(),
                        sampler_name(sampler), static_cast<unsigned long long>(seed),
                        result.final_mse, result.diverged ? " (diverged)" : "");
        } else if (*suite_cmd) {
            const PdeProblem problem = problem_by_name(problem_name, ref_path);
            SuiteSpec spec;
            spec.problem = problem_name;
            spec.ref_path = ref_path;
            spec.samplers = parse_sampler_list(samplers_arg);
            spec.base_seed = seed;
            spec.outdir = outdir;
            if (iters) spec.max_iter = iters;
            if (interval) spec.interval = interval;
            if (n_pde) spec.n_pde = n_pde;
            apply_preset(spec, problem, preset);
            if (replicates) spec.replicates = replicates;
            SuiteStats stats = run_suite(spec);
            emit_plot_scripts(spec.outdir);
            for (const SamplerStats& r : stats.rows)
                std::printf("%-12s mean %.4g  median %.4g  [%.4g, %.4g]  diverged %zu\n",
                            sampler_name(r.sampler), r.mean, r.p50, r.min, r.max, r.diverged);
        } else if (*nodes_cmd) {
            if (demo != "lshape") throw std::runtime_error("unknown demo: " + demo);
            std::filesystem::create_directories(outdir);
            GridErrorMap e(Rect::unit(), 256, 256);
            for (size_t j = 0; j < e.ny; ++j)
                for (size_t i = 0; i < e.nx; ++i)
                    e.at(i, j) = 1.0 - sdf_lshape(e.node(i, j));
            const NormalizedErrorMap prior(Rect::unit(), e.nx, e.ny, 0.0);
            std::ofstream gp(outdir + "/plot_lshape.gp");
            gp << "set datafile separator ','\nset size ratio -1\n"
               << "set term pngcairo size 1200,900\nset output 'lshape.png'\n"
               << "set multiplot layout " << scales.size() << "," << ratios.size() << "\n";
            for (double s : scales) {
                for (double r : ratios) {
                    RngStream rng(seed);
                    auto [ns, ebar] = arff(Rect::unit(), e, prior, {0.0, r, s}, rng);
                    ns = filter_inside(ns, [](Point2 p) { return sdf_lshape(p) >= 0.0; });
                    char name[128];
                    std::snprintf(name, sizeof(name), "lshape_r%g_s%g.csv", r, s);
                    ns.save_csv(outdir + "/" + name);
                    std::printf("r=%-6g s=%-6g -> %zu nodes (%s)\n", r, s, ns.size(), name);
                    gp << "set title 'r=" << r << " s=" << s << "'\nplot '" << name
                       << "' using 1:2 skip 1 with points pt 7 ps 0.3 notitle\n";
                }
            }
            gp << "unset multiplot\n";
        }
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
    return 0;
}
