#include "volflow/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <volflow/body.hpp>
#include <volflow/densities.hpp>
#include <volflow/diagnostics.hpp>
#include <volflow/functionals.hpp>
#include <volflow/gaussian.hpp>
#include <volflow/heatflow.hpp>
#include <volflow/legendre.hpp>
#include <volflow/oracles/oracles.hpp>
#include <volflow/quadrature.hpp>

#include "volflow/csv.hpp"
#include "volflow/plot.hpp"

namespace volflow::cli {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

/// Runs body(i) for i < n on up to `threads` workers. Results go into
/// caller-owned slots, so the output order never depends on scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first;
    std::mutex m;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(m);
                if (!first) first = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (first) std::rethrow_exception(first);
}

bool flagged(const LogQuad& q) { return q.flagged || q.tail_ratio > kTailWarn; }

long long as_int(bool b) { return b ? 1 : 0; }

struct Context {
    const Config& cfg;
    const RunOptions& opt;
    std::string scenario;
    std::vector<std::string> failures;
    std::vector<Series> plot;
    PlotOptions plot_options;

    double tol(const std::string& key, double fallback) const { return cfg.number(key, fallback) * opt.tol_scale; }

    void check(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }

    std::ostream* log() const { return opt.log; }
};

const std::set<std::string> kCommonKeys{"scenario", "grid.dim", "grid.half_width", "grid.points", "output.csv", "output.svg"};

void check_keys(const Config& cfg, std::set<std::string> extra, bool uses_density) {
    extra.insert(kCommonKeys.begin(), kCommonKeys.end());
    std::set<std::string> prefixes;
    if (uses_density) prefixes.insert("density.");
    cfg.check_known(extra, prefixes);
}

GridSpec grid_from(const Config& cfg) {
    const int dim = cfg.integer("grid.dim", 1);
    if (dim < 1 || dim > 3) cfg.fail("grid.dim", "grid.dim must be 1, 2 or 3");
    const double hw = cfg.number("grid.half_width", dim == 1 ? 8.0 : 6.0);
    const int points = cfg.integer("grid.points", dim == 1 ? 513 : 129);
    try {
        return make_grid(dim, hw, points);
    } catch (const std::invalid_argument& e) {
        cfg.fail(cfg.has("grid.points") ? "grid.points" : "grid.half_width", e.what());
    }
}

DensitySpec density_from(const Config& cfg) {
    DensitySpec spec;
    spec.family = cfg.text("density.family", "gaussian");
    for (const auto& [key, value] : cfg.section("density"))
        if (key != "family") spec.params[key] = cfg.number("density." + key);
    return spec;
}

LogDensity make_input(const Config& cfg, const DensitySpec& spec, const GridSpec& g) {
    try {
        return make_density(spec, g);
    } catch (const std::invalid_argument& e) {
        cfg.fail("density.family", e.what());
    }
}

std::vector<std::pair<std::string, LogDensity>> inputs_from(const Config& cfg, const GridSpec& g) {
    std::vector<std::pair<std::string, LogDensity>> out;
    if (cfg.flag("run.battery", false)) {
        for (const auto& spec : battery(g.dim())) out.emplace_back(spec.label(), make_input(cfg, spec, g));
    } else {
        const DensitySpec spec = density_from(cfg);
        out.emplace_back(spec.label(), make_input(cfg, spec, g));
    }
    return out;
}

// ---- flow -------------------------------------------------------------------

CsvTable run_flow(Context& c) {
    check_keys(c.cfg, {"run.times", "assert.monotone", "assert.slack"}, true);
    const GridSpec g = grid_from(c.cfg);
    const DensitySpec spec = density_from(c.cfg);
    const LogDensity f0 = make_input(c.cfg, spec, g);
    std::vector<double> times = c.cfg.numbers("run.times", {0.05, 0.1, 0.2, 0.5, 1.0, 2.0});
    for (std::size_t i = 0; i < times.size(); ++i)
        if (!(times[i] > 0.0) || (i > 0 && !(times[i] > times[i - 1])))
            c.cfg.fail("run.times", "run.times must be positive and strictly increasing");
    times.insert(times.begin(), 0.0);

    std::vector<LogQuad> mass(times.size()), v(times.size());
    parallel_for(times.size(), c.opt.threads, [&](std::size_t i) {
        const LogDensity ft = fp_evolve(f0, times[i]);
        mass[i] = log_integral(ft);
        v[i] = volume_product(ft);
    });

    CsvTable t({"t", "log_mass", "log_v", "v_over_gauss", "tail_ratio", "flag"});
    const double log_gauss = g.dim() * kLog2Pi;
    const bool monotone = c.cfg.flag("assert.monotone", true);
    const double slack = c.tol("assert.slack", 1e-4);
    Series s{spec.label(), {}};
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double ratio = std::exp(v[i].log_abs - log_gauss);
        t.add_row({times[i], mass[i].log_abs, v[i].log_abs, ratio, std::max(mass[i].tail_ratio, v[i].tail_ratio),
                   as_int(v[i].flagged)});
        s.points.emplace_back(times[i], ratio);
        if (monotone && i > 0) {
            const double step = std::expm1(v[i].log_abs - v[i - 1].log_abs);
            c.check(step >= -slack, "v decreases from t=" + format_number(times[i - 1]) + " to t=" + format_number(times[i]) +
                                        " (relative step " + format_number(step) + ")");
        }
    }
    c.plot.push_back(std::move(s));
    c.plot_options = {"volume product along the flow", "t", "v(f_t) / (2 pi)^n", false, false};
    return t;
}

// ---- revhc ------------------------------------------------------------------

CsvTable run_revhc(Context& c) {
    check_keys(c.cfg, {"run.s", "run.p", "run.q", "run.battery", "assert.slack"}, true);
    const GridSpec g = grid_from(c.cfg);
    const auto inputs = inputs_from(c.cfg, g);
    const auto s_list = c.cfg.numbers("run.s", {0.2, 0.5 * std::numbers::ln2, 1.0});
    std::vector<double> p_list, q_list;
    for (double s : s_list) {
        if (!(s > 0.0)) c.cfg.fail("run.s", "run.s entries must be positive");
        const auto ex = ExponentSchedule::endpoint(s);
        p_list.push_back(ex.p);
        q_list.push_back(ex.q);
    }
    if (c.cfg.has("run.p")) p_list = c.cfg.numbers("run.p");
    if (c.cfg.has("run.q")) q_list = c.cfg.numbers("run.q");
    if (p_list.size() != s_list.size()) c.cfg.fail("run.p", "run.p must have one entry per run.s entry");
    if (q_list.size() != s_list.size()) c.cfg.fail("run.q", "run.q must have one entry per run.s entry");
    for (std::size_t i = 0; i < s_list.size(); ++i) {
        if (!(p_list[i] > 0.0)) c.cfg.fail("run.p", "run.p entries must be positive");
        if (!(q_list[i] < 0.0)) c.cfg.fail("run.q", "run.q entries must be negative");
    }

    const std::size_t n = inputs.size() * s_list.size();
    std::vector<RevHCReport> out(n);
    parallel_for(n, c.opt.threads, [&](std::size_t k) {
        const std::size_t d = k / s_list.size(), j = k % s_list.size();
        out[k] = rev_hc_value(inputs[d].second, s_list[j], p_list[j], q_list[j]);
    });

    const double slack = c.tol("assert.slack", 1e-4);
    CsvTable t({"density", "s", "p", "q", "log_lhs", "log_rhs", "slack", "tail_ratio", "flag"});
    for (std::size_t d = 0; d < inputs.size(); ++d) {
        Series series{inputs[d].first, {}};
        for (std::size_t j = 0; j < s_list.size(); ++j) {
            const auto& r = out[d * s_list.size() + j];
            t.add_row({inputs[d].first, s_list[j], p_list[j], q_list[j], r.log_lhs.log_abs, r.log_rhs.log_abs, r.slack,
                       std::max(r.log_lhs.tail_ratio, r.log_rhs.tail_ratio), as_int(flagged(r.log_lhs) || flagged(r.log_rhs))});
            series.points.emplace_back(s_list[j], r.slack);
            c.check(r.slack >= -slack, inputs[d].first + ": slack " + format_number(r.slack) + " at s=" + format_number(s_list[j]));
        }
        c.plot.push_back(std::move(series));
    }
    c.plot_options = {"reverse hypercontractivity slack", "s", "log lhs - log rhs", false, false};
    return t;
}

// ---- nelson -----------------------------------------------------------------

CsvTable run_nelson(Context& c) {
    check_keys(c.cfg, {"run.s", "run.p", "run.q", "run.betas", "run.shifts", "assert.floor", "assert.ceiling"}, false);
    const int dim = c.cfg.integer("grid.dim", 1);
    if (dim < 1 || dim > 3) c.cfg.fail("grid.dim", "grid.dim must be 1, 2 or 3");
    const double s = c.cfg.number("run.s", 1.0);
    const double p = c.cfg.number("run.p", 0.5);
    if (!(s > 0.0)) c.cfg.fail("run.s", "run.s must be positive");
    if (!(p > 0.0 && p < 1.0)) c.cfg.fail("run.p", "run.p must lie in (0, 1)");
    const double threshold = nelson_q(s, p);
    const auto q_list = c.cfg.numbers("run.q", {threshold - 0.2, threshold - 0.1, threshold, threshold + 0.1});
    for (double q : q_list)
        if (!(q < 0.0)) c.cfg.fail("run.q", "run.q entries must be negative");
    const auto betas = c.cfg.numbers("run.betas", {1, 2, 4, 8, 16, 32, 64});
    const auto shifts = c.cfg.numbers("run.shifts", {0, 1, 2, 4, 8, 16, 32, 64});
    for (double b : betas)
        if (!(b > 0.0)) c.cfg.fail("run.betas", "run.betas entries must be positive");
    // tolerances scale the distance to the ideal value 1 and to 0 respectively
    const double floor = 1.0 - (1.0 - c.cfg.number("assert.floor", 0.9)) * c.opt.tol_scale;
    const double ceiling = c.tol("assert.ceiling", 0.1);

    CsvTable t({"q", "q_threshold", "admissible", "beta", "shift", "log_value", "divergent"});
    for (double q : q_list) {
        const bool admissible = q >= threshold - 1e-12;
        Series series{"q=" + format_number(q), {}};
        double inf = kInf;
        for (double a : shifts) {
            double best = kInf;
            for (double b : betas) {
                std::vector<double> shift(static_cast<std::size_t>(dim), 0.0);
                shift[0] = a;
                const LogQuad v = gaussian_rev_hc(b, shift, s, p, q);
                const double log_v = v.divergent ? kInf : v.is_zero() ? -kInf : v.log_abs;
                t.add_row({q, threshold, as_int(admissible), b, a, log_v, as_int(v.divergent)});
                best = std::min(best, v.value());
            }
            series.points.emplace_back(a, best);
            inf = std::min(inf, best);
        }
        if (c.log()) *c.log() << "q=" << format_number(q) << (admissible ? " (admissible)" : " (below threshold)") << " inf=" << format_number(inf) << '\n';
        if (admissible)
            c.check(inf >= floor, "infimum " + format_number(inf) + " below the floor at q=" + format_number(q));
        else if (threshold - q >= 0.1 - 1e-12)
            c.check(inf <= ceiling, "infimum " + format_number(inf) + " does not decay at q=" + format_number(q));
        c.plot.push_back(std::move(series));
    }
    c.plot_options = {"Gaussian family, infimum over beta", "shift", "value", false, true};
    return t;
}

// ---- laplace ----------------------------------------------------------------

CsvTable run_laplace(Context& c) {
    check_keys(c.cfg, {"run.p", "run.battery", "assert.rel"}, true);
    const GridSpec g = grid_from(c.cfg);
    const auto inputs = inputs_from(c.cfg, g);
    const auto p_list = c.cfg.numbers("run.p", {0.5});
    for (double p : p_list)
        if (!(p > 0.0 && p < 1.0)) c.cfg.fail("run.p", "run.p entries must lie in (0, 1)");
    const double rel = c.tol("assert.rel", 1e-3);

    const std::size_t n = inputs.size() * p_list.size();
    std::vector<LogQuad> out(n);
    parallel_for(n, c.opt.threads, [&](std::size_t k) {
        out[k] = laplace_norm_ratio(inputs[k / p_list.size()].second, p_list[k % p_list.size()]);
    });

    CsvTable t({"density", "p", "log_ratio", "log_bound", "ratio_over_bound", "tail_ratio", "flag"});
    for (std::size_t k = 0; k < n; ++k) {
        const auto& name = inputs[k / p_list.size()].first;
        const double p = p_list[k % p_list.size()];
        const bool bounded = g.dim() == 1 && p == 0.5;
        const double log_bound = bounded ? -std::log(4.0 * std::numbers::pi) : std::nan("");
        const double ratio = bounded ? std::exp(out[k].log_abs - log_bound) : std::nan("");
        t.add_row({name, p, out[k].log_abs, log_bound, ratio, out[k].tail_ratio, as_int(flagged(out[k]))});
        if (bounded) c.check(ratio >= 1.0 - rel, name + ": ratio " + format_number(ratio) + " x 1/(4 pi) below the bound");
    }
    return t;
}

// ---- blconst ----------------------------------------------------------------

CsvTable run_blconst(Context& c) {
    check_keys(c.cfg, {"run.s", "run.log_box", "run.check_grid", "assert.tol", "assert.grid_rel"}, false);
    const GridSpec g = grid_from(c.cfg);
    const auto s_list = c.cfg.numbers("run.s", {0.5 * std::numbers::ln2});
    for (double s : s_list)
        if (!(s > 0.0)) c.cfg.fail("run.s", "run.s entries must be positive");
    const double log_box = c.cfg.number("run.log_box", 12.0);
    const bool check_grid = c.cfg.flag("run.check_grid", g.dim() == 1);
    const double tol = c.tol("assert.tol", 1e-3);
    const double grid_rel = c.tol("assert.grid_rel", 1e-2);

    CsvTable t({"s", "p", "q", "log_bl", "log_c_s", "log_product", "a1", "a2", "log_grid_at_argmin", "degenerate"});
    for (double s : s_list) {
        const BLData d = endpoint_bl_data(s, g.dim());
        const BLConstant bl = gaussian_bl_constant(d, log_box);
        const double lc = log_c_s(s, g.dim());
        const double prod = lc + bl.value.log_abs;
        double log_grid = std::nan("");
        if (check_grid && !bl.degenerate) {
            Eigen::MatrixXd a1 = Eigen::MatrixXd::Zero(g.dim(), g.dim()), a2 = a1;
            for (int k = 0; k < g.dim(); ++k) {
                a1(k, k) = bl.a1[static_cast<std::size_t>(k)];
                a2(k, k) = bl.a2[static_cast<std::size_t>(k)];
            }
            log_grid = bl_integral(gaussian_to_logdensity(GaussianSpec::make(1.0, a1), g),
                                   gaussian_to_logdensity(GaussianSpec::make(1.0, a2), g), d)
                           .log_abs;
            const double closed = bl_gaussian_objective(d, bl.a1, bl.a2);
            c.check(std::fabs(std::expm1(log_grid - closed)) <= grid_rel,
                    "grid integral at the argmin misses the closed form at s=" + format_number(s));
        }
        t.add_row({s, d.exponents.p, d.exponents.q, bl.value.log_abs, lc, prod, bl.a1.empty() ? std::nan("") : bl.a1[0],
                   bl.a2.empty() ? std::nan("") : bl.a2[0], log_grid, as_int(bl.degenerate)});
        c.check(!bl.degenerate, "optimizer ran into the search box at s=" + format_number(s));
        c.check(std::fabs(prod) <= tol, "log(C_s BL) = " + format_number(prod) + " at s=" + format_number(s));
    }
    return t;
}

// ---- lrvol ------------------------------------------------------------------

CsvTable run_lrvol(Context& c) {
    check_keys(c.cfg, {"run.lp", "run.r", "run.rows", "run.outer_spacing", "run.decay", "assert.disk_max", "assert.slack"}, false);
    const int dim = c.cfg.integer("grid.dim", 2);
    if (dim != 2) c.cfg.fail("grid.dim", "lrvol runs in two dimensions");
    const auto lp = c.cfg.numbers("run.lp", {2.0, kInf, 1.0});
    for (double v : lp)
        if (!(v >= 1.0)) c.cfg.fail("run.lp", "run.lp entries must be >= 1 (inf for the square)");
    const auto r_list = c.cfg.numbers("run.r", {1.0, 2.0, 5.0});
    for (double r : r_list)
        if (!(r > 0.0)) c.cfg.fail("run.r", "run.r entries must be positive");
    LrOptions lo;
    lo.rows = c.cfg.integer("run.rows", lo.rows);
    lo.outer_spacing = c.cfg.number("run.outer_spacing", lo.outer_spacing);
    lo.decay = c.cfg.number("run.decay", lo.decay);
    if (lo.rows < 3) c.cfg.fail("run.rows", "run.rows must be at least 3");
    if (!(lo.outer_spacing > 0.0)) c.cfg.fail("run.outer_spacing", "run.outer_spacing must be positive");
    const bool disk_max = c.cfg.flag("assert.disk_max", true);
    const double slack = c.tol("assert.slack", 1e-3);

    const std::size_t n = lp.size() * r_list.size();
    std::vector<LogQuad> out(n);
    parallel_for(n, c.opt.threads, [&](std::size_t k) {
        out[k] = lr_volume_product(BodySpec::lp_ball(2, lp[k / r_list.size()]), r_list[k % r_list.size()], lo);
    });

    CsvTable t({"lp", "r", "log_m", "m", "tail_ratio", "flag"});
    const auto disk = std::find(lp.begin(), lp.end(), 2.0);
    for (std::size_t i = 0; i < lp.size(); ++i) {
        Series series{"l" + format_number(lp[i]), {}};
        for (std::size_t j = 0; j < r_list.size(); ++j) {
            const LogQuad& m = out[i * r_list.size() + j];
            t.add_row({lp[i], r_list[j], m.log_abs, m.value(), m.tail_ratio, as_int(flagged(m))});
            series.points.emplace_back(r_list[j], m.value());
            if (disk_max && disk != lp.end()) {
                const LogQuad& md = out[static_cast<std::size_t>(disk - lp.begin()) * r_list.size() + j];
                const double gap = -std::expm1(m.log_abs - md.log_abs);
                c.check(gap >= -slack, "l" + format_number(lp[i]) + " beats the disk at r=" + format_number(r_list[j]));
            }
        }
        c.plot.push_back(std::move(series));
    }
    c.plot_options = {"L^r volume product", "r", "M_r", false, false};
    return t;
}

// ---- tropical -----------------------------------------------------------------

CsvTable run_tropical(Context& c) {
    check_keys(c.cfg, {"run.s", "assert.decreasing", "assert.floor", "assert.final_err"}, true);
    const GridSpec g = grid_from(c.cfg);
    const DensitySpec spec = density_from(c.cfg);
    const LogDensity f = make_input(c.cfg, spec, g);
    const auto s_list = c.cfg.numbers("run.s", {0.4, 0.2, 0.1});
    for (std::size_t i = 0; i < s_list.size(); ++i)
        if (!(s_list[i] > 0.0) || (i > 0 && !(s_list[i] < s_list[i - 1])))
            c.cfg.fail("run.s", "run.s must be positive and strictly decreasing");
    const bool decreasing = c.cfg.flag("assert.decreasing", true);
    const double floor = c.tol("assert.floor", 1e-6);
    const bool has_final = c.cfg.has("assert.final_err");
    const double final_err = has_final ? c.tol("assert.final_err", 0.05) : 0.0;

    const LogQuad v = volume_product(f);
    const TropicalCurve curve = tropical_limit_curve(f, s_list);
    c.check(!curve.truncated, "the curve stopped early: a kernel is narrower than the grid spacing");

    CsvTable t({"s", "p", "q", "log_bridge", "log_v", "rel_err", "tail_ratio", "flag"});
    Series series{spec.label(), {}};
    double prev = kInf;
    for (const auto& pt : curve.points) {
        const auto ex = ExponentSchedule::endpoint(pt.s);
        const double err = std::fabs(std::expm1(pt.log_bridge - v.log_abs));
        t.add_row({pt.s, ex.p, ex.q, pt.log_bridge, v.log_abs, err, pt.tail_ratio, as_int(pt.flagged)});
        series.points.emplace_back(pt.s, err);
        if (decreasing) c.check(err < prev || err < floor, "error does not decrease at s=" + format_number(pt.s));
        prev = err;
    }
    if (has_final && !curve.points.empty())
        c.check(prev <= final_err, "final error " + format_number(prev) + " above " + format_number(final_err));
    c.plot.push_back(std::move(series));
    c.plot_options = {"bridge error as s -> 0", "s", "|bridge - v| / v", true, true};
    return t;
}

// ---- legendre-check ---------------------------------------------------------

CsvTable run_legendre_check(Context& c) {
    check_keys(c.cfg, {"run.trials", "run.trials_2d", "run.seed", "run.max_points"}, false);
    const int trials = c.cfg.integer("run.trials", 50);
    const int trials_2d = c.cfg.integer("run.trials_2d", 5);
    const int seed = c.cfg.integer("run.seed", 12345);
    const int max_points = c.cfg.integer("run.max_points", 129);
    if (trials < 0 || trials_2d < 0) c.cfg.fail("run.trials", "trial counts must be nonnegative");
    if (max_points < 5) c.cfg.fail("run.max_points", "run.max_points must be at least 5");

    std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto odd_points = [&](int top) { return 2 * static_cast<int>(rng() % static_cast<unsigned>((top - 1) / 2)) + 3; };

    CsvTable t({"trial", "dim", "kind", "primal_points", "dual_points", "mismatches", "max_abs_dev"});
    long long total = 0;
    const char* const kinds[] = {"convex", "arbitrary", "sparse"};
    for (int trial = 0; trial < trials + trials_2d; ++trial) {
        const int dim = trial < trials ? 1 : 2;
        const int kind = trial % 3;
        const int top = dim == 1 ? max_points : std::min(max_points, 33);
        const int np = odd_points(top), nd = odd_points(top);
        const GridSpec g = make_grid(dim, 1.0 + 4.0 * std::fabs(unit(rng)), np);
        const GridSpec dg = make_grid(dim, 0.5 + 6.0 * std::fabs(unit(rng)), nd);
        std::vector<double> phi(g.total());
        const double a = std::fabs(unit(rng)) + 0.1, b = unit(rng);
        for (std::size_t i = 0; i < phi.size(); ++i) {
            const auto x = g.node(i);
            double r = 0.0;
            for (int k = 0; k < dim; ++k) r += std::fabs(x[k]) + b * x[k];
            if (kind == 0)
                phi[i] = a * r;
            else if (kind == 1)
                phi[i] = 3.0 * unit(rng);
            else
                phi[i] = rng() % 3 == 0 ? 5.0 * unit(rng) : kInf;
        }
        phi[g.total() / 2] = 0.0;
        const LogDensity f(g, phi, false);
        const DualGrid dual{dg};
        const LogDensity fast = legendre_transform(f, dual);
        const LogDensity brute = oracles::brute_legendre(f, dual);
        // axis-by-axis maxima round differently from the all-pairs one in 2D
        const double tol = dim == 1 ? 0.0 : 1e-12;
        long long bad = 0;
        double dev = 0.0;
        for (std::size_t j = 0; j < fast.size(); ++j) {
            const double a = fast.phi(j), b = brute.phi(j);
            if (std::isfinite(a) && std::isfinite(b)) {
                const double d = std::fabs(a - b);
                dev = std::max(dev, d);
                if (d > tol * std::max(1.0, std::fabs(b))) ++bad;
            } else if (!(a == b)) {
                ++bad;
            }
        }
        total += bad;
        t.add_row({static_cast<long long>(trial), static_cast<long long>(dim), std::string(kinds[kind]),
                   static_cast<long long>(np), static_cast<long long>(nd), bad, dev});
    }
    c.check(total == 0, std::to_string(total) + " dual nodes differ from the brute-force conjugate");
    return t;
}

// ---- validate ---------------------------------------------------------------

struct Check {
    std::string name;
    double computed = 0.0, expected = 0.0, tol = 0.0;
};

CsvTable run_validate(Context& c) {
    check_keys(c.cfg, {"assert.scale"}, false);
    const double scale = c.cfg.number("assert.scale", 1.0) * c.opt.tol_scale;
    const GridSpec g1 = make_grid(1, 8.0, 513);
    const GridSpec g2 = make_grid(2, 6.0, 129);
    auto closed = [](const std::string& name, const std::map<std::string, double>& p) {
        return oracles::gaussian_closed_forms(name, p).log_abs;
    };
    const LogDensity gamma1 = gaussian_to_logdensity(GaussianSpec::isotropic(1, 1.0), g1);

    std::vector<std::function<Check()>> jobs;
    for (int n : {1, 2})
        jobs.push_back([&, n] {
            const GridSpec& g = n == 1 ? g1 : g2;
            return Check{"v_gamma n=" + std::to_string(n),
                         volume_product(gaussian_to_logdensity(GaussianSpec::isotropic(n, 1.0), g)).log_abs,
                         closed("v_gamma", {{"n", n}}), 5e-3};
        });
    jobs.push_back([&] {
        const LogDensity ft = fp_evolve(gaussian_to_logdensity(GaussianSpec::isotropic(1, 2.0), g1), 0.5);
        std::vector<double> lx2(ft.size());
        for (std::size_t i = 0; i < ft.size(); ++i) {
            const double x = g1.coord(0, static_cast<int>(i));
            lx2[i] = x == 0.0 ? -kInf : 2.0 * std::log(std::fabs(x)) - ft.phi(i);
        }
        const double var = std::exp(log_trapezoid(g1, lx2).log_abs - log_integral(ft).log_abs);
        return Check{"fp variance law beta=2 t=0.5", var, std::exp(closed("fp_variance_law", {{"beta", 2.0}, {"t", 0.5}})), 1e-5};
    });
    jobs.push_back([&] {
        return Check{"moment ODE beta=2 t=0.5", oracles::moment_ode_rk4(2.0, 0.5),
                     std::exp(closed("fp_variance_law", {{"beta", 2.0}, {"t", 0.5}})), 1e-8};
    });
    // beta = q keeps gamma_beta^q at unit variance, well inside the box
    for (double q : {0.5, 2.0})
        jobs.push_back([&, q] {
            const LogDensity f = gaussian_to_logdensity(GaussianSpec::isotropic(1, q), g1);
            return Check{"gaussian L^q norm q=" + format_number(q), log_lq_norm(f, q).log_abs,
                         closed("gaussian_lq_norm", {{"beta", q}, {"q", q}, {"n", 1}}), 1e-8};
        });
    jobs.push_back([&] {
        const double a = 0.7, s = 0.3;
        const LogDensity e = LogDensity::from_function(g1, [&](std::span<const double> y) { return -a * y[0]; }, false);
        const LogDensity out = ou_apply(e, s);
        const std::size_t node = static_cast<std::size_t>(g1.center(0) + 16);  // x = 0.5
        return Check{"OU on exp(a y) at x=0.5", -out.phi(node), closed("ou_exponential", {{"a", a}, {"s", s}, {"x", 0.5}}), 1e-6};
    });
    jobs.push_back([&] {
        return Check{"Laplace ratio of gamma p=1/2", laplace_norm_ratio(gamma1, 0.5).log_abs,
                     closed("laplace_gamma_ratio", {{"p", 0.5}, {"n", 1}}), 1e-3};
    });
    jobs.push_back([&] {
        const GridSpec xg = make_grid(1, 2.0, 65);
        const LaplaceResult r = laplace_f_t(gamma1, 0.5, xg);
        return Check{"Laplace transform of gamma at x=1", r.log_f[48], closed("laplace_gamma", {{"p", 0.5}, {"x", 1.0}}), 1e-6};
    });
    jobs.push_back([&] { return Check{"C_s s=0.3", log_c_s(0.3, 1), closed("c_s", {{"s", 0.3}, {"n", 1}}), 1e-12}; });
    jobs.push_back([&] {
        const double s = 0.5 * std::numbers::ln2;
        return Check{"BL endpoint constant", gaussian_bl_constant(endpoint_bl_data(s, 1)).value.log_abs,
                     closed("bl_endpoint", {{"s", s}, {"n", 1}}), 1e-3};
    });
    jobs.push_back([&] {
        const double s = 0.3;
        const auto ex = ExponentSchedule::endpoint(s);
        const LogDensity f = gaussian_to_logdensity(GaussianSpec::isotropic(1, 2.0), g1);
        return Check{"reverse HC of gamma_2 s=0.3", rev_hc_value(f, s, ex.p, ex.q).log_lhs.log_abs,
                     gaussian_rev_hc(2.0, {0.0}, s, ex.p, ex.q).log_abs, 1e-6};
    });
    jobs.push_back([&] {
        Eigen::MatrixXd cov(2, 2);
        cov << 1.0, 0.4, 0.4, 0.8;
        const LogDensity f = gaussian_to_logdensity(GaussianSpec::make(2.5, cov), g2);
        oracles::QuadraticForm qf{cov.inverse(), Eigen::VectorXd(), 0.5 * std::log((2.0 * std::numbers::pi * cov).determinant()) - std::log(2.5)};
        return Check{"correlated Gaussian mass", log_integral(f).log_abs, oracles::gaussian_form_integral(qf).log_abs, 1e-8};
    });
    jobs.push_back([&] {
        LrOptions lo;
        return Check{"M_1 disk", std::exp(lr_volume_product(BodySpec::lp_ball(2, 2.0), 1.0, lo).log_abs), oracles::lr_disk(1.0), 1e-3};
    });
    jobs.push_back([&] {
        LrOptions lo;
        return Check{"M_1 square", std::exp(lr_volume_product(BodySpec::lp_ball(2, kInf), 1.0, lo).log_abs), oracles::lr_square(1.0),
                     1e-3};
    });
    jobs.push_back([&] {
        const GridSpec g = make_grid(2, 3.0, 33);
        const LogDensity f = make_density({"cross", {}}, g);
        const DualGrid d = default_dual_grid(f);
        const LogDensity a = legendre_transform(f, d), b = oracles::brute_legendre(f, d);
        double dev = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) dev = std::max(dev, std::fabs(a.phi(i) - b.phi(i)));
        return Check{"2D transform vs brute force", dev, 0.0, 1e-12};
    });

    std::vector<Check> results(jobs.size());
    parallel_for(jobs.size(), c.opt.threads, [&](std::size_t i) { results[i] = jobs[i](); });

    CsvTable t({"check", "computed", "expected", "abs_err", "tol", "pass"});
    std::ostringstream table;
    for (const auto& r : results) {
        const double err = std::fabs(r.computed - r.expected);
        const double tol = r.tol * scale;
        const bool ok = err <= tol;
        t.add_row({r.name, r.computed, r.expected, err, tol, as_int(ok)});
        c.check(ok, r.name + ": error " + format_number(err) + " > " + format_number(tol));
        char line[160];
        std::snprintf(line, sizeof line, "%-4s %-36s err=%-12.3g tol=%.3g\n", ok ? "ok" : "FAIL", r.name.c_str(), err, tol);
        table << line;
    }
    if (c.log()) *c.log() << table.str();
    return t;
}

using Runner = CsvTable (*)(Context&);

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> m{
        {"flow", run_flow},         {"revhc", run_revhc},       {"nelson", run_nelson},
        {"laplace", run_laplace},   {"blconst", run_blconst},   {"lrvol", run_lrvol},
        {"tropical", run_tropical}, {"legendre-check", run_legendre_check}, {"validate", run_validate},
    };
    return m;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"flow",    "revhc",    "nelson",         "laplace", "blconst",
                                                "lrvol",   "tropical", "legendre-check", "validate"};
    return names;
}

RunResult run_scenario(const std::string& scenario, const Config& cfg, const RunOptions& opt) {
    const auto it = runners().find(scenario);
    if (it == runners().end()) throw ConfigError("unknown scenario '" + scenario + "'");
    if (cfg.has("scenario") && cfg.text("scenario") != scenario)
        cfg.fail("scenario", "config is for scenario '" + cfg.text("scenario") + "', not '" + scenario + "'");
    if (!(opt.tol_scale > 0.0)) throw ConfigError("tolerance scale must be positive");

    Context ctx{cfg, opt, scenario, {}, {}, {}};
    const CsvTable table = it->second(ctx);
    const std::string csv_name = cfg.text("output.csv", scenario + ".csv");
    const std::string svg_name = cfg.text("output.svg", "");

    RunResult result;
    std::filesystem::create_directories(opt.out_dir);
    const std::string comment = "volflow " + scenario + " | " + cfg.resolved() + "; tol_scale=" + format_number(opt.tol_scale);
    const std::string csv_path = (std::filesystem::path(opt.out_dir) / csv_name).string();
    table.write(csv_path, comment);
    result.files.push_back(csv_path);
    if (!svg_name.empty() && !ctx.plot.empty()) {
        const std::string svg_path = (std::filesystem::path(opt.out_dir) / svg_name).string();
        emit_plot(ctx.plot, svg_path, ctx.plot_options);
        result.files.push_back(svg_path);
    }
    const auto warnings = drain_warnings();
    if (opt.log && !warnings.empty()) *opt.log << warnings.size() << " numerical warning(s); first: " << warnings.front() << '\n';
    result.failures = std::move(ctx.failures);
    result.status = result.failures.empty() ? 0 : 1;
    return result;
}

}  // namespace volflow::cli
