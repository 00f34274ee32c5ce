#include "rang/suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

namespace fs = std::filesystem;

namespace rang {

double quantile_linear(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile_linear: empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

SuiteStats run_suite(const SuiteSpec& spec) {
    if (spec.replicates < 1) throw std::invalid_argument("run_suite: replicates >= 1 required");
    if (spec.samplers.empty()) throw std::invalid_argument("run_suite: no samplers given");
    const PdeProblem problem = problem_by_name(spec.problem, spec.ref_path);
    fs::create_directories(spec.outdir);

    SuiteStats stats;
    char buf[256];
    for (SamplerKind sampler : spec.samplers) {
        std::vector<double> mses;
        std::vector<std::vector<LogRow>> histories;
        size_t diverged = 0;
        for (size_t i = 0; i < spec.replicates; ++i) {
            TrainConfig cfg = TrainConfig::for_problem(problem, spec.base_seed + i);
            if (spec.max_iter) cfg.max_iter = *spec.max_iter;
            if (spec.interval) cfg.interval = *spec.interval;
            if (spec.n_pde) cfg.n_pde = *spec.n_pde;
            TrainResult r = train(problem, cfg, sampler);
            save_train_result(r, spec.outdir, spec.problem, sampler, cfg.seed);
            mses.push_back(r.final_mse);
            histories.push_back(std::move(r.history));
            if (r.diverged) ++diverged;
        }
        stats.rows.push_back({sampler,
                              std::accumulate(mses.begin(), mses.end(), 0.0) /
                                  static_cast<double>(mses.size()),
                              quantile_linear(mses, 0.0), quantile_linear(mses, 0.25),
                              quantile_linear(mses, 0.5), quantile_linear(mses, 0.75),
                              quantile_linear(mses, 1.0), diverged});

        // Median MSE across replicates at each logged iteration (replicates
        // that diverged early drop out of later medians).
        const size_t max_len =
            std::max_element(histories.begin(), histories.end(), [](auto& a, auto& b) {
                return a.size() < b.size();
            })->size();
        std::ofstream curve(spec.outdir + "/" + spec.problem + "_" +
                            sampler_name(sampler) + "_median_curve.csv");
        curve << "iter,mse_median\n";
        for (size_t k = 0; k < max_len; ++k) {
            std::vector<double> col;
            size_t iter = 0;
            for (const auto& h : histories) {
                if (k < h.size() && std::isfinite(h[k].mse)) {
                    col.push_back(h[k].mse);
                    iter = h[k].iter;
                }
            }
            if (col.empty()) continue;
            std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", iter, quantile_linear(col, 0.5));
            curve << buf;
        }
    }

    std::ofstream out(spec.outdir + "/" + spec.problem + "_stats.csv");
    if (!out) throw std::runtime_error("cannot write stats table");
    out << "# final MSE per sampler over " << spec.replicates
        << " replicates; quartiles by linear interpolation between order statistics\n";
    out << "sampler,mean,min,p25,p50,p75,max,diverged,replicates\n";
    for (const SamplerStats& r : stats.rows) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%zu,%zu\n",
                      sampler_name(r.sampler), r.mean, r.min, r.p25, r.p50, r.p75, r.max,
                      r.diverged, spec.replicates);
        out << buf;
    }
    return stats;
}

void emit_plot_scripts(const std::string& outdir) {
    std::vector<std::string> curves, statsf;
    std::map<std::string, std::vector<std::pair<int, std::string>>> snapshots; // run base -> files
    if (!fs::is_directory(outdir))
        throw std::runtime_error("emit_plot_scripts: no such directory " + outdir);
    for (const auto& entry : fs::directory_iterator(outdir)) {
        const std::string name = entry.path().filename().string();
        if (name.ends_with("_median_curve.csv")) curves.push_back(name);
        else if (name.ends_with("_stats.csv")) statsf.push_back(name);
        else {
            const auto pos = name.find("_nodes_");
            if (pos != std::string::npos && name.ends_with(".csv"))
                snapshots[name.substr(0, pos)].push_back(
                    {std::stoi(name.substr(pos + 7)), name});
        }
    }
    if (curves.empty() && statsf.empty() && snapshots.empty())
        throw std::runtime_error("emit_plot_scripts: no suite artifacts in " + outdir +
                                 " (expected *_median_curve.csv, *_stats.csv or *_nodes_*.csv)");
    std::sort(curves.begin(), curves.end());
    std::sort(statsf.begin(), statsf.end());

    if (!curves.empty()) {
        std::ofstream gp(outdir + "/plot_curves.gp");
        gp << "set datafile separator ','\nset logscale y\nset xlabel 'iteration'\n"
              "set ylabel 'MSE (median)'\nset key outside\nset term pngcairo size 900,600\n"
              "set output 'curves.png'\nplot \\\n";
        for (size_t i = 0; i < curves.size(); ++i) {
            std::string label = curves[i].substr(0, curves[i].size() - 17);
            gp << "  '" << curves[i] << "' using 1:2 skip 1 with lines title '" << label << "'"
               << (i + 1 < curves.size() ? ", \\\n" : "\n");
        }
    }
    if (!statsf.empty()) {
        std::ofstream gp(outdir + "/plot_box.gp");
        gp << "set datafile separator ','\nset logscale y\nset ylabel 'final MSE'\n"
              "set style fill empty\nset boxwidth 0.4\nset term pngcairo size 900,600\n"
              "set output 'box.png'\n"
              "# columns: sampler,mean,min,p25,p50,p75,max\n"
              "plot '" << statsf.front()
           << "' skip 2 using 0:4:3:7:6:xtic(1) with candlesticks whiskerbars title '', \\\n"
              "  '' skip 2 using 0:5:5:5:5 with candlesticks lt -1 title 'median'\n";
    }
    if (!snapshots.empty()) {
        std::ofstream gp(outdir + "/plot_nodes.gp");
        gp << "set datafile separator ','\nset size ratio -1\nset term pngcairo size 1200,900\n";
        for (auto& [base, files] : snapshots) {
            std::sort(files.begin(), files.end());
            gp << "set output '" << base << "_nodes.png'\n"
               << "set multiplot layout " << (files.size() + 2) / 3 << ",3 title '" << base
               << "'\n";
            for (const auto& [idx, file] : files)
                gp << "set title 'resample " << idx << "'\nplot '" << file
                   << "' using 1:2 skip 1 with points pt 7 ps 0.3 notitle\n";
            gp << "unset multiplot\n";
        }
    }
}

} // namespace rang
