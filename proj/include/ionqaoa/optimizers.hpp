#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ionqaoa/linalg.hpp"

namespace ionqaoa::opt {

using linalg::Mat;
using linalg::Vec;
using CostFn = std::function<double(const Vec&)>;
using ScalarFn = std::function<double(double)>;

struct OptResult {
    Vec x;
    double f = 0.0;
    std::uint64_t n_evals = 0;
    bool converged = false;
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

namespace detail {

// Single call path for cost evaluations; every optimizer routes its cost
// through one of these so n_evals accounting is exact.
class CountedCost {
  public:
    explicit CountedCost(const CostFn& fn) : fn_(fn) {}
    double operator()(const Vec& x) {
        ++count_;
        return fn_(x);
    }
    std::uint64_t count() const { return count_; }

  private:
    const CostFn& fn_;
    std::uint64_t count_ = 0;
};

inline Vec clip_to_box(Vec x, const Vec& lo, const Vec& hi) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    return x;
}

}  // namespace detail

struct BfgsOptions {
    double grad_step = 1e-6;  // central-difference step, scaled by max(1, |x_i|)
    double gtol = 1e-8;       // projected-gradient inf-norm stopping tolerance
    int max_iters = 100;
};

// Box-constrained quasi-Newton descent: BFGS inverse-Hessian updates with a
// backtracking Armijo line search, gradients by central finite differences.
// Iterates are clipped to the box; gradient components pushing through an
// active bound are projected out for the stopping test. Finite-difference
// probes may evaluate slightly outside the box (the cost must be defined
// there; for periodic circuit angles it always is).
inline OptResult bfgs_box_minimize(const CostFn& cost, Vec x0, const Vec& lo, const Vec& hi,
                                   const BfgsOptions& opts = {}) {
    const std::size_t dim = x0.size();
    if (lo.size() != dim || hi.size() != dim)
        throw std::invalid_argument("bfgs_box_minimize: box dimension mismatch");
    detail::CountedCost f(cost);

    Vec x = detail::clip_to_box(std::move(x0), lo, hi);
    double fx = f(x);

    auto gradient = [&](const Vec& at) {
        Vec g(dim);
        Vec probe = at;
        for (std::size_t i = 0; i < dim; ++i) {
            const double h = opts.grad_step * std::max(1.0, std::abs(at[i]));
            probe[i] = at[i] + h;
            const double fp = f(probe);
            probe[i] = at[i] - h;
            const double fm = f(probe);
            probe[i] = at[i];
            g[i] = (fp - fm) / (2.0 * h);
        }
        return g;
    };
    auto projected_inf_norm = [&](const Vec& at, const Vec& g) {
        double m = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const bool blocked_lo = at[i] <= lo[i] && g[i] > 0.0;
            const bool blocked_hi = at[i] >= hi[i] && g[i] < 0.0;
            if (!blocked_lo && !blocked_hi) m = std::max(m, std::abs(g[i]));
        }
        return m;
    };

    Mat h_inv = Mat::identity(dim);
    Vec g = gradient(x);
    bool converged = false;

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        if (projected_inf_norm(x, g) <= opts.gtol) {
            converged = true;
            break;
        }

        Vec d(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) d[i] -= h_inv(i, j) * g[j];
        if (linalg::dot(d, g) >= 0.0) {  // not a descent direction, reset
            h_inv = Mat::identity(dim);
            for (std::size_t i = 0; i < dim; ++i) d[i] = -g[i];
        }

        // Armijo backtracking on the clipped step
        double t = 1.0;
        Vec x_new;
        double f_new = fx;
        bool accepted = false;
        for (int back = 0; back < 30; ++back) {
            Vec trial(dim);
            for (std::size_t i = 0; i < dim; ++i) trial[i] = x[i] + t * d[i];
            trial = detail::clip_to_box(std::move(trial), lo, hi);
            double slope = 0.0;
            for (std::size_t i = 0; i < dim; ++i) slope += g[i] * (trial[i] - x[i]);
            if (slope >= 0.0) {  // fully blocked by the box
                t *= 0.5;
                continue;
            }
            const double ft = f(trial);
            if (ft <= fx + 1e-4 * slope) {
                x_new = std::move(trial);
                f_new = ft;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            converged = projected_inf_norm(x, g) <= 10.0 * opts.gtol;
            break;
        }

        Vec s(dim), y(dim);
        bool hit_bound = false;
        for (std::size_t i = 0; i < dim; ++i) {
            s[i] = x_new[i] - x[i];
            if (x_new[i] <= lo[i] || x_new[i] >= hi[i]) hit_bound = true;
        }
        Vec g_new = gradient(x_new);
        for (std::size_t i = 0; i < dim; ++i) y[i] = g_new[i] - g[i];

        const double sy = linalg::dot(s, y);
        if (hit_bound) {
            h_inv = Mat::identity(dim);  // curvature info is unreliable after projection
        } else if (sy > 1e-12 * linalg::norm2(s) * linalg::norm2(y)) {
            const double rho = 1.0 / sy;
            Vec hy(dim, 0.0);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j) hy[i] += h_inv(i, j) * y[j];
            const double yhy = linalg::dot(y, hy);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j)
                    h_inv(i, j) += (1.0 + rho * yhy) * rho * s[i] * s[j] -
                                   rho * (s[i] * hy[j] + hy[i] * s[j]);
        }

        const double step_inf = linalg::norm_inf(s);
        x = std::move(x_new);
        fx = f_new;
        g = std::move(g_new);
        if (step_inf < 1e-12) {
            converged = true;
            break;
        }
    }

    return {std::move(x), fx, f.count(), converged};
}

// Cost values on an N_beta x N_gamma half-open grid, plus the location of the
// minimum (lexicographically smallest index on ties).
struct GridScan {
    int n_beta = 0;
    int n_gamma = 0;
    Vec values;  // row-major, beta index major
    int argmin_i = 0;
    int argmin_j = 0;
    Vec betas;
    Vec gammas;

    double min() const { return values[static_cast<std::size_t>(argmin_i) * n_gamma + argmin_j]; }
};

template <typename Cost2>
GridScan grid_scan(Cost2&& cost, Range beta, Range gamma, int grid_n) {
    if (grid_n < 2) throw std::invalid_argument("grid_scan: grid_n must be >= 2");
    if (!(beta.hi > beta.lo) || !(gamma.hi > gamma.lo))
        throw std::invalid_argument("grid_scan: empty range");

    GridScan scan;
    scan.n_beta = grid_n;
    scan.n_gamma = grid_n;
    scan.betas.resize(grid_n);
    scan.gammas.resize(grid_n);
    for (int i = 0; i < grid_n; ++i) {
        scan.betas[i] = beta.lo + i * (beta.hi - beta.lo) / grid_n;
        scan.gammas[i] = gamma.lo + i * (gamma.hi - gamma.lo) / grid_n;
    }
    scan.values.resize(static_cast<std::size_t>(grid_n) * grid_n);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            const double v = cost(scan.betas[i], scan.gammas[j]);
            if (!std::isfinite(v))
                throw NumericalError("grid_scan: non-finite cost at grid point (" +
                                     std::to_string(i) + ", " + std::to_string(j) + "), beta=" +
                                     std::to_string(scan.betas[i]) + ", gamma=" +
                                     std::to_string(scan.gammas[j]));
            scan.values[static_cast<std::size_t>(i) * grid_n + j] = v;
            if (v < best) {
                best = v;
                scan.argmin_i = i;
                scan.argmin_j = j;
            }
        }
    }
    return scan;
}

// Grid-seeded local descent over a (beta, gamma) landscape: evaluate the cost
// on a grid, then run the quasi-Newton stage from the grid argmin. n_evals
// counts grid and descent evaluations together.
inline std::pair<OptResult, GridScan> grid_seeded_minimize_scan(const CostFn& cost, Range beta,
                                                                Range gamma, int grid_n = 10,
                                                                const BfgsOptions& opts = {}) {
    detail::CountedCost f(cost);
    GridScan scan =
        grid_scan([&](double b, double g) { return f(Vec{b, g}); }, beta, gamma, grid_n);
    OptResult res = bfgs_box_minimize([&](const Vec& x) { return f(x); },
                                      Vec{scan.betas[scan.argmin_i], scan.gammas[scan.argmin_j]},
                                      Vec{beta.lo, gamma.lo}, Vec{beta.hi, gamma.hi}, opts);
    res.n_evals = f.count();
    return {std::move(res), std::move(scan)};
}

inline OptResult grid_seeded_minimize(const CostFn& cost, Range beta, Range gamma, int grid_n = 10,
                                      const BfgsOptions& opts = {}) {
    return grid_seeded_minimize_scan(cost, beta, gamma, grid_n, opts).first;
}

namespace detail {

// Brent's 1-D local minimizer on a closed interval (golden section with
// safeguarded parabolic steps). An incumbent (x_init, f_init) inside [a, b]
// seeds the search, so the result never regresses past a known value.
template <typename F>
double brent_min(F&& g, double a, double b, double rel_tol, double abs_tol, double* f_out,
                 double x_init, double f_init) {
    constexpr double golden = 0.3819660112501051;
    double x = x_init;
    double w = x, v = x;
    double fx = f_init;
    double fw = fx, fv = fx;
    double d = 0.0, e = 0.0;

    for (int iter = 0; iter < 120; ++iter) {
        const double m = 0.5 * (a + b);
        const double tol = rel_tol * std::abs(x) + abs_tol;
        if (std::abs(x - m) <= 2.0 * tol - 0.5 * (b - a)) break;

        bool parabolic = false;
        if (std::abs(e) > tol) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_old = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_old) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < 2.0 * tol || b - u < 2.0 * tol) d = (m > x) ? tol : -tol;
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < m) ? b - x : a - x;
            d = golden * e;
        }

        const double u = (std::abs(d) >= tol) ? x + d : x + ((d > 0.0) ? tol : -tol);
        const double fu = g(u);
        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    if (f_out) *f_out = fx;
    return x;
}

// Golden-ratio expansion bracket around t = 0 inside [lo, hi]. Returns the
// interval to hand to brent_min plus the best sample seen, so the line
// search refines the basin adjacent to the current iterate instead of
// wandering into a different one.
template <typename F>
void bracket_minimum(F&& g, double lo, double hi, double f0, double& a, double& b, double& x_best,
                     double& f_best) {
    constexpr double gold = 1.6180339887498949;
    double ax = 0.0, fa = f0;
    const double h0 = std::min(1.0, 0.5 * (hi - lo));
    double bx = (hi >= -lo) ? std::min(hi, h0) : std::max(lo, -h0);
    double fb = g(bx);
    if (fb > fa) {
        std::swap(ax, bx);
        std::swap(fa, fb);
    }
    double cx = std::clamp(bx + gold * (bx - ax), lo, hi);
    double fc = g(cx);
    for (int guard = 0; fb > fc && guard < 60; ++guard) {
        if (cx == lo || cx == hi) break;  // decreasing into the boundary
        ax = bx;
        fa = fb;
        bx = cx;
        fb = fc;
        cx = std::clamp(bx + gold * (bx - ax), lo, hi);
        if (cx == bx) break;
        fc = g(cx);
    }
    a = std::min({ax, bx, cx});
    b = std::max({ax, bx, cx});
    x_best = bx;
    f_best = fb;
    if (fa < f_best) {
        x_best = ax;
        f_best = fa;
    }
    if (fc < f_best) {
        x_best = cx;
        f_best = fc;
    }
}

}  // namespace detail

struct PowellOptions {
    double cycle_tol = 1e-8;  // relative per-cycle improvement threshold
    int max_cycles = 200;
    double line_tol = 1e-8;
};

// Powell's conjugate-direction minimization over a box, line searches by
// Brent on the feasible segment so iterates never leave the bounds.
inline OptResult direction_set_minimize(const CostFn& cost, Vec x0, const Vec& lo, const Vec& hi,
                                        const PowellOptions& opts = {}) {
    const std::size_t dim = x0.size();
    if (lo.size() != dim || hi.size() != dim)
        throw std::invalid_argument("direction_set_minimize: box dimension mismatch");
    detail::CountedCost f(cost);

    Vec x = detail::clip_to_box(std::move(x0), lo, hi);
    double fx = f(x);

    auto line_min = [&](Vec& at, double& f_at, const Vec& dir) {
        double t_lo = -std::numeric_limits<double>::infinity();
        double t_hi = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < dim; ++i) {
            if (dir[i] == 0.0) continue;
            const double ta = (lo[i] - at[i]) / dir[i];
            const double tb = (hi[i] - at[i]) / dir[i];
            t_lo = std::max(t_lo, std::min(ta, tb));
            t_hi = std::min(t_hi, std::max(ta, tb));
        }
        if (!(t_hi > t_lo) || !std::isfinite(t_lo) || !std::isfinite(t_hi)) return;
        Vec probe(dim);
        auto g = [&](double t) {
            for (std::size_t i = 0; i < dim; ++i)
                probe[i] = std::clamp(at[i] + t * dir[i], lo[i], hi[i]);
            return f(probe);
        };
        double a = t_lo, b = t_hi, t_seed = 0.0, f_seed = f_at;
        detail::bracket_minimum(g, t_lo, t_hi, f_at, a, b, t_seed, f_seed);
        double f_best = 0.0;
        const double t_best =
            detail::brent_min(g, a, b, opts.line_tol, 1e-10, &f_best, t_seed, f_seed);
        if (f_best < f_at) {
            for (std::size_t i = 0; i < dim; ++i)
                at[i] = std::clamp(at[i] + t_best * dir[i], lo[i], hi[i]);
            f_at = f_best;
        }
    };

    std::vector<Vec> dirs(dim, Vec(dim, 0.0));
    for (std::size_t i = 0; i < dim; ++i) dirs[i][i] = 1.0;

    bool converged = false;
    for (int cycle = 0; cycle < opts.max_cycles; ++cycle) {
        const Vec x_start = x;
        const double f_start = fx;
        double big_delta = 0.0;
        std::size_t big_idx = 0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double f_before = fx;
            line_min(x, fx, dirs[i]);
            if (f_before - fx > big_delta) {
                big_delta = f_before - fx;
                big_idx = i;
            }
        }
        if (2.0 * (f_start - fx) <= opts.cycle_tol * (std::abs(f_start) + std::abs(fx)) + 1e-25) {
            converged = true;
            break;
        }

        // Extrapolated point test; replace the direction of largest decrease
        // with the cycle displacement when it pays off.
        Vec x_ext(dim);
        for (std::size_t i = 0; i < dim; ++i)
            x_ext[i] = std::clamp(2.0 * x[i] - x_start[i], lo[i], hi[i]);
        const double f_ext = f(x_ext);
        if (f_ext < f_start) {
            const double a = f_start - fx - big_delta;
            const double b = f_start - f_ext;
            const double t = 2.0 * (f_start - 2.0 * fx + f_ext) * a * a - big_delta * b * b;
            if (t < 0.0) {
                Vec d_new(dim);
                double nrm = 0.0;
                for (std::size_t i = 0; i < dim; ++i) {
                    d_new[i] = x[i] - x_start[i];
                    nrm += d_new[i] * d_new[i];
                }
                nrm = std::sqrt(nrm);
                if (nrm > 0.0) {
                    for (double& v : d_new) v /= nrm;
                    line_min(x, fx, d_new);
                    dirs[big_idx] = dirs[dim - 1];
                    dirs[dim - 1] = std::move(d_new);
                }
            }
        }
    }

    return {std::move(x), fx, f.count(), converged};
}

struct ScalarMaxOptions {
    double lo = 0.05;
    double hi = 1.0;
    double step0 = 0.2;
    double step_tol = 5e-4;
    int max_evals = 50;
};

// Derivative-free 1-D maximization by a shrinking symmetric bracket around
// the incumbent. A return value of -1 marks an infeasible sample and is
// never accepted as an improvement; if every sample is infeasible the start
// point is returned with converged=false. Evaluations are memoized, so the
// cap bounds distinct samples.
inline OptResult scalar_maximize(const ScalarFn& fn, double alpha0 = 0.8,
                                 const ScalarMaxOptions& opts = {}) {
    if (!(alpha0 > 0.0 && alpha0 <= opts.hi))
        throw std::invalid_argument("scalar_maximize: alpha0 must lie in (0, hi]");

    std::uint64_t n_evals = 0;
    std::vector<std::pair<double, double>> memo;
    auto eval = [&](double a) {
        for (const auto& [xa, va] : memo)
            if (std::abs(xa - a) < 1e-12) return va;
        ++n_evals;
        const double v = fn(a);
        memo.emplace_back(a, v);
        return v;
    };
    auto feasible = [](double v) { return v != -1.0; };

    double best_x = std::clamp(alpha0, opts.lo, opts.hi);
    double best_f = eval(best_x);
    bool any_feasible = feasible(best_f);

    double h = opts.step0;
    while (h >= opts.step_tol && n_evals < static_cast<std::uint64_t>(opts.max_evals)) {
        bool improved = false;
        for (const double cand : {best_x - h, best_x + h}) {
            const double c = std::clamp(cand, opts.lo, opts.hi);
            if (std::abs(c - best_x) < 1e-12) continue;
            if (n_evals >= static_cast<std::uint64_t>(opts.max_evals)) break;
            const double v = eval(c);
            if (!feasible(v)) continue;
            if (!any_feasible || v > best_f) {
                best_x = c;
                best_f = v;
                any_feasible = true;
                improved = true;
                break;  // recentre before probing further
            }
        }
        if (!improved) h *= 0.5;
    }

    if (!any_feasible) return {Vec{alpha0}, best_f, n_evals, false};
    return {Vec{best_x}, best_f, n_evals, h < opts.step_tol};
}

}  // namespace ionqaoa::opt
