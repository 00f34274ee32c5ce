#include "rang/pinn.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace rang {

namespace {

TV tape_mean(Tape& t, const std::vector<TV>& terms) {
    TV acc = terms.front();
    for (size_t i = 1; i < terms.size(); ++i) acc = acc + terms[i];
    return {&t, t.affine(acc.v, 1.0 / static_cast<double>(terms.size()), 0.0)};
}

} // namespace

TrainConfig TrainConfig::for_problem(const PdeProblem& p, uint64_t seed_) {
    TrainConfig c;
    c.max_iter = p.defaults.max_iter;
    c.interval = p.defaults.interval;
    c.n_pde = p.defaults.n_pde;
    c.n_ic = p.defaults.n_ic;
    c.n_bc = p.defaults.n_bc;
    c.weights = p.defaults.weights;
    c.seed = seed_;
    return c;
}

std::pair<double, std::vector<double>> pde_loss(const PdeProblem& problem, const MlpParams& params,
                                                const NodeSet& nodes) {
    if (nodes.points.empty()) throw std::invalid_argument("pde_loss: empty node set");
    std::vector<double> mags;
    mags.reserve(nodes.size());
    double sum = 0.0;
    for (const Point2& p : nodes.points) {
        auto d = eval_derivs(params, p, problem.x_deg, problem.y_deg);
        const double r2 = problem.residual_sq_num(d, p);
        sum += r2;
        mags.push_back(std::sqrt(r2));
    }
    return {sum / static_cast<double>(nodes.size()), std::move(mags)};
}

std::pair<double, double> ic_bc_losses(const PdeProblem& problem, const MlpParams& params,
                                       size_t n_ic, size_t n_bc) {
    Tape t(params.values);
    NetEvalT ev = [&](Point2 q, int xd, int yd) {
        return emit_forward_jet(t, params.arch, 0, q, xd, yd);
    };
    double l0 = 0.0;
    if (problem.has_ic) l0 = t.val(problem.ic_loss(t, ev, n_ic).v);
    const double lb = t.val(problem.bc_loss(t, ev, n_bc).v);
    return {l0, lb};
}

double total_loss(const LossWeights& w, double l_pde, double l_0, double l_b) {
    if (!std::isfinite(l_pde) || !std::isfinite(l_0) || !std::isfinite(l_b))
        throw std::domain_error("total_loss: non-finite component");
    return w.w_pde * l_pde + w.w_0 * l_0 + w.w_b * l_b;
}

GridErrorMap residual_grid(const PdeProblem& problem, const MlpParams& params, size_t nx,
                           size_t ny) {
    GridErrorMap g(problem.domain, nx, ny);
    for (size_t j = 0; j < ny; ++j) {
        for (size_t i = 0; i < nx; ++i) {
            const Point2 p = g.node(i, j);
            auto d = eval_derivs(params, p, problem.x_deg, problem.y_deg);
            g.at(i, j) = std::sqrt(problem.residual_sq_num(d, p));
        }
    }
    return g;
}

double mse_on_grid(const MlpParams& params, const PdeProblem& problem, size_t grid_n) {
    double sum = 0.0;
    if (problem.ref_grid) {
        const GridReference& ref = *problem.ref_grid;
        for (size_t j = 0; j < ref.ny; ++j) {
            for (size_t i = 0; i < ref.nx; ++i) {
                const auto vals = eval_values(params, ref.node(i, j));
                for (int c = 0; c < ref.comps; ++c) {
                    const double d = vals[static_cast<size_t>(c)] - ref.value(i, j, c);
                    sum += d * d;
                }
            }
        }
        return sum / static_cast<double>(ref.nx * ref.ny);
    }
    if (!problem.reference)
        throw std::runtime_error("mse_on_grid: problem '" + problem.name +
                                 "' has no reference solution loaded");
    for (size_t j = 0; j < grid_n; ++j) {
        for (size_t i = 0; i < grid_n; ++i) {
            const Point2 p{
                problem.domain.xmin + static_cast<double>(i) * problem.domain.width() /
                                          static_cast<double>(grid_n - 1),
                problem.domain.ymin + static_cast<double>(j) * problem.domain.height() /
                                          static_cast<double>(grid_n - 1)};
            const auto vals = eval_values(params, p);
            const auto refs = problem.reference(p);
            for (size_t c = 0; c < refs.size(); ++c) {
                const double d = vals[c] - refs[c];
                sum += d * d;
            }
        }
    }
    return sum / static_cast<double>(grid_n * grid_n);
}

std::vector<size_t> time_histogram(const NodeSet& ns, const Rect& rect, size_t n_bins) {
    if (n_bins < 1) throw std::invalid_argument("time_histogram: n_bins >= 1 required");
    std::vector<size_t> bins(n_bins, 0);
    for (const Point2& p : ns.points) {
        double u = (p.y - rect.ymin) / rect.height() * static_cast<double>(n_bins);
        size_t b = u <= 0 ? 0 : static_cast<size_t>(u);
        bins[std::min(b, n_bins - 1)] += 1;
    }
    return bins;
}

TrainResult train(const PdeProblem& problem, const TrainConfig& cfg, SamplerKind sampler) {
    const MlpArch arch = problem.arch();
    RngStream init_rng = RngStream::derive(cfg.seed, 0);
    TrainResult res;
    res.params = init_params(arch, init_rng);
    AdamState adam(res.params.values.size());

    const double beta = cfg.beta.value_or(sampler_beta(sampler));
    const BisectionBounds bounds =
        cfg.bounds ? *cfg.bounds : BisectionBounds::defaults_for(cfg.n_pde);
    const bool adaptive = sampler_adaptive(sampler);
    const bool ff_family = adaptive || sampler == SamplerKind::FF || sampler == SamplerKind::FfR;
    const bool has_ref = problem.ref_grid || problem.reference;

    const GridErrorMap zero_unit(Rect::unit(), cfg.err_nx, cfg.err_ny, 0.0);
    NormalizedErrorMap etilde_unit = zero_unit; // carried memory, unit-square coords

    NodeSet nodes;
    Tape tape;
    TV loss{}, l0{}, lb{}, lpde{};
    double s_cur = 0.0;
    bool cal_ok = true;

    auto regenerate = [&](size_t resample_idx) {
        RngStream rs = RngStream::derive(cfg.seed, resample_idx + 1);
        if (sampler == SamplerKind::Random || sampler == SamplerKind::RandomR)
            nodes = sample_random(problem.domain, cfg.n_pde, rs);
        else if (sampler == SamplerKind::Hammersley)
            nodes = sample_hammersley(problem.domain, cfg.n_pde);
        else if (sampler == SamplerKind::LHS || sampler == SamplerKind::LhsR)
            nodes = sample_lhs(problem.domain, cfg.n_pde, rs);
        else {
            GridErrorMap e_unit = zero_unit;
            if (adaptive && resample_idx > 0)
                e_unit =
                    residual_grid(problem, res.params, cfg.err_nx, cfg.err_ny).to_unit_square();
            auto cal = calibrated_arff(Rect::unit(), e_unit, etilde_unit, adaptive ? beta : 0.0,
                                       cfg.ratio, cfg.n_pde, bounds, rs);
            if (adaptive) etilde_unit = std::move(cal.ebar);
            nodes = std::move(cal.nodes);
            for (Point2& q : nodes.points) q = problem.domain.from_unit(q);
            s_cur = cal.s_final;
            cal_ok = cal.within_tol;
        }
        nodes.sampler_tag = sampler;
        nodes.generation_seed = cfg.seed;
        res.snapshots.push_back(nodes);
        res.s_history.push_back(ff_family ? s_cur : 0.0);
        res.calib_ok.push_back(cal_ok ? 1 : 0);

        tape = Tape(res.params.values);
        NetEvalT ev = [&](Point2 q, int xd, int yd) {
            return emit_forward_jet(tape, arch, 0, q, xd, yd);
        };
        std::vector<TV> terms;
        terms.reserve(nodes.size());
        for (const Point2& p : nodes.points) {
            auto d = emit_forward_jet(tape, arch, 0, p, problem.x_deg, problem.y_deg);
            terms.push_back(problem.residual_sq_tape(d, p));
        }
        lpde = tape_mean(tape, terms);
        l0 = problem.has_ic ? problem.ic_loss(tape, ev, cfg.n_ic)
                            : TV{&tape, tape.constant(0.0)};
        lb = problem.bc_loss(tape, ev, cfg.n_bc);
        loss = {&tape, tape.add(tape.affine(lpde.v, cfg.weights.w_pde, 0.0),
                                tape.add(tape.affine(l0.v, cfg.weights.w_0, 0.0),
                                         tape.affine(lb.v, cfg.weights.w_b, 0.0)))};
    };

    auto current_mse = [&]() {
        return has_ref ? mse_on_grid(res.params, problem, cfg.mse_grid)
                       : std::numeric_limits<double>::quiet_NaN();
    };

    std::vector<double> grad(res.params.values.size());
    for (size_t iter = 0; iter < cfg.max_iter; ++iter) {
        if (iter == 0 || (sampler_resamples(sampler) && iter % cfg.interval == 0))
            regenerate(iter / cfg.interval);
        tape.forward();
        const double lv = tape.val(loss.v);
        if (!std::isfinite(lv)) {
            res.diverged = true;
            res.diverged_iter = iter;
            return res;
        }
        if (iter % cfg.log_every == 0) {
            const double mse = current_mse();
            if (std::isfinite(mse)) res.final_mse = mse;
            res.history.push_back(
                {iter, lv, tape.val(l0.v), tape.val(lb.v), tape.val(lpde.v), mse, s_cur});
        }
        tape.backward(loss.v, grad);
        try {
            adam_step(res.params, grad, adam);
        } catch (const std::exception&) {
            res.diverged = true;
            res.diverged_iter = iter;
            return res;
        }
    }
    tape.forward();
    const double mse = current_mse();
    if (std::isfinite(mse)) res.final_mse = mse;
    res.history.push_back({cfg.max_iter, tape.val(loss.v), tape.val(l0.v), tape.val(lb.v),
                           tape.val(lpde.v), mse, s_cur});
    return res;
}

void save_train_result(const TrainResult& result, const std::string& outdir,
                       const std::string& problem, SamplerKind sampler, uint64_t seed) {
    namespace fs = std::filesystem;
    fs::create_directories(outdir);
    const std::string base =
        outdir + "/" + problem + "_" + sampler_name(sampler) + "_" + std::to_string(seed);

    std::ofstream out(base + ".csv");
    if (!out) throw std::runtime_error("cannot write " + base + ".csv");
    out << "iter,loss,L0,Lb,Lpde,mse,s\n";
    char buf[256];
    for (const LogRow& r : result.history) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.iter, r.loss,
                      r.l0, r.lb, r.lpde, r.mse, r.s);
        out << buf;
    }
    if (result.diverged) out << "# diverged at iteration " << result.diverged_iter << "\n";

    for (size_t k = 0; k < result.snapshots.size(); ++k)
        result.snapshots[k].save_csv(base + "_nodes_" + std::to_string(k) + ".csv");
}

} // namespace rang
