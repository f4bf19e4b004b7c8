#ifndef KWLE_QUADRATURE_HPP
#define KWLE_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "kwle/errors.hpp"

namespace kwle {

/// Point of the open unit interval. `om` carries 1-u exactly, so integrands
/// with singular factors at u=1 can be evaluated without cancellation even on
/// mesh panels far closer to 1 than machine epsilon allows in plain doubles.
struct UnitPoint {
    double u;
    double om;  // == 1 - u
};

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_depth = 40;  // dyadic refinements toward each endpoint
};

/// Defaults used for the double integrals (looser absolute tolerance).
inline QuadratureSpec quadrature_spec_2d() { return QuadratureSpec{1e-8, 1e-8, 40}; }

struct QuadResult {
    double value;
    double error;  // last refinement difference
};

/// Brownian-bridge covariance kernel K(v,w) = min(v,w) - vw.
inline double bridge_kernel(double v, double w) {
    return std::min(v, w) - v * w;
}

/// Cancellation-free kernel evaluation: min(v,w) - vw == min(v,w)*(1-max(v,w)).
inline double bridge_kernel(const UnitPoint& v, const UnitPoint& w) {
    return v.u <= w.u ? v.u * w.om : w.u * v.om;
}

struct OmegaForms {
    double omega1;  // <f1, f1>
    double omega2;  // <f1, f1 f2>
    double omega3;  // <f1 f2, f1 f2>
};

enum class Symmetry2d { none, symmetric };

namespace detail {

// 15-point Gauss-Legendre rule on (-1,1): node 0 plus seven +- pairs.
inline constexpr std::array<double, 8> gl15_nodes = {
    0.0,
    0.2011940939974345,
    0.3941513470775634,
    0.5709721726085388,
    0.7244177313601701,
    0.8482065834104272,
    0.9372733924007060,
    0.9879925180204854,
};
inline constexpr std::array<double, 8> gl15_weights = {
    0.2025782419255613,
    0.1984314853271116,
    0.1861610000155622,
    0.1662692058169939,
    0.1395706779261543,
    0.1071592204671719,
    0.0703660474881081,
    0.0307532419961173,
};
inline constexpr int gl15_count = 15;

// Full rule on (0,1): ascending nodes with weights summing to 1.
void gl15_unit(std::array<double, 15>& x, std::array<double, 15>& w);

// One panel of the graded mesh, described in its own coordinate: u for
// panels touching the left half, s = 1-u for panels in the right half.
struct Panel {
    double lo, hi;
    bool from_right;
};

// Dyadically graded panels covering (0,1): (0, 2^-d], ..., [1/4, 1/2] and the
// mirror image in s-space. Depth is clamped to [2, 300].
std::vector<Panel> graded_panels(int depth);

template <typename F>
inline double call_point(F&& f, const UnitPoint& p) {
    if constexpr (std::is_invocable_v<F, const UnitPoint&>)
        return f(p);
    else
        return f(p.u);
}

inline UnitPoint panel_point(const Panel& p, double t) {
    // t is the coordinate inside the panel's own space.
    if (p.from_right) return UnitPoint{1.0 - t, t};
    return UnitPoint{t, 1.0 - t};
}

template <typename F>
double integrate_panels_1d(F&& f, const std::vector<Panel>& panels) {
    std::array<double, 15> xs{}, ws{};
    gl15_unit(xs, ws);
    double total = 0.0;
    for (const Panel& p : panels) {
        const double h = p.hi - p.lo;
        double acc = 0.0;
        for (int i = 0; i < gl15_count; ++i) {
            const double t = p.lo + h * xs[i];
            acc += ws[i] * call_point(f, panel_point(p, t));
        }
        total += h * acc;
    }
    return total;
}

// Tensor block over two distinct panels.
template <typename G>
double integrate_block_2d(G&& g, const Panel& pv, const Panel& pw) {
    std::array<double, 15> xs{}, ws{};
    gl15_unit(xs, ws);
    const double hv = pv.hi - pv.lo, hw = pw.hi - pw.lo;
    double acc = 0.0;
    for (int i = 0; i < gl15_count; ++i) {
        const UnitPoint v = panel_point(pv, pv.lo + hv * xs[i]);
        double row = 0.0;
        for (int j = 0; j < gl15_count; ++j) {
            const UnitPoint w = panel_point(pw, pw.lo + hw * xs[j]);
            row += ws[j] * g(v, w);
        }
        acc += ws[i] * row;
    }
    return hv * hw * acc;
}

// Integral of g over the part of the diagonal square panel where v < w
// (collapsed mapping; the kernel kink along v == w is never straddled).
template <typename G>
double integrate_diag_triangle(G&& g, const Panel& p, bool lower_in_panel_space) {
    std::array<double, 15> xs{}, ws{};
    gl15_unit(xs, ws);
    const double h = p.hi - p.lo;
    double acc = 0.0;
    for (int i = 0; i < gl15_count; ++i) {
        const double touter = p.lo + h * xs[i];
        double row = 0.0;
        for (int j = 0; j < gl15_count; ++j) {
            const double tinner = p.lo + (touter - p.lo) * xs[j];
            const UnitPoint a = panel_point(p, tinner);
            const UnitPoint b = panel_point(p, touter);
            // In panel space tinner < touter; from_right flips the u-order.
            row += ws[j] * (lower_in_panel_space ? g(a, b) : g(b, a));
        }
        acc += ws[i] * (touter - p.lo) * row;
    }
    return h * acc;
}

template <typename G>
double integrate_panels_2d(G&& g, const std::vector<Panel>& panels, Symmetry2d sym) {
    const std::size_t np = panels.size();
    double total = 0.0;
    for (std::size_t k = 0; k < np; ++k) {
        for (std::size_t m = k + 1; m < np; ++m) {
            const double block = integrate_block_2d(g, panels[k], panels[m]);
            if (sym == Symmetry2d::symmetric)
                total += 2.0 * block;
            else
                total += block + integrate_block_2d(g, panels[m], panels[k]);
        }
        if (sym == Symmetry2d::symmetric) {
            total += 2.0 * integrate_diag_triangle(g, panels[k], true);
        } else {
            total += integrate_diag_triangle(g, panels[k], true);
            total += integrate_diag_triangle(g, panels[k], false);
        }
    }
    return total;
}

std::vector<int> depth_sequence(int max_depth);

std::string nonconvergence_message(const char* name, int depth, double value, double err);

// Batched evaluation of the three symmetric kernel forms
//   int int p(v) p(w) K(v,w) * {1, (e(v)+e(w))/2, e(v) e(w)} dv dw
// sharing one mesh pass. p and e are evaluated once per node instead of once
// per node pair, which matters when they contain quantile evaluations.
template <typename P, typename E>
std::array<double, 3> kernel_triple_at_depth(P&& p, E&& e, int depth) {
    std::array<double, 15> xs{}, ws{};
    gl15_unit(xs, ws);
    const std::vector<Panel> panels = graded_panels(depth);
    const std::size_t np = panels.size();

    // per-panel node data
    std::vector<std::array<UnitPoint, 15>> pts(np);
    std::vector<std::array<double, 15>> pw(np), ev(np);
    for (std::size_t k = 0; k < np; ++k) {
        const double h = panels[k].hi - panels[k].lo;
        for (int i = 0; i < gl15_count; ++i) {
            const UnitPoint pt = panel_point(panels[k], panels[k].lo + h * xs[i]);
            pts[k][i] = pt;
            pw[k][i] = h * ws[i] * p(pt);
            ev[k][i] = e(pt);
        }
    }

    double t0 = 0.0, t1 = 0.0, t2 = 0.0;
    for (std::size_t k = 0; k < np; ++k) {
        for (std::size_t m = k + 1; m < np; ++m) {
            double b0 = 0.0, b1 = 0.0, b2 = 0.0;
            for (int i = 0; i < gl15_count; ++i) {
                const UnitPoint& v = pts[k][i];
                const double pv = pw[k][i], evi = ev[k][i];
                for (int j = 0; j < gl15_count; ++j) {
                    const double core = pv * pw[m][j] * bridge_kernel(v, pts[m][j]);
                    b0 += core;
                    b1 += core * (evi + ev[m][j]);
                    b2 += core * evi * ev[m][j];
                }
            }
            t0 += 2.0 * b0;
            t1 += b1;  // the 0.5 symmetrization factor cancels against doubling
            t2 += 2.0 * b2;
        }
        // diagonal panel as a doubled triangle (all three forms are symmetric)
        const Panel& pan = panels[k];
        const double h = pan.hi - pan.lo;
        double d0 = 0.0, d1 = 0.0, d2 = 0.0;
        for (int i = 0; i < gl15_count; ++i) {
            const UnitPoint& vo = pts[k][i];
            const double po = pw[k][i], eo = ev[k][i];
            const double touter = pan.lo + h * xs[i];
            const double span = touter - pan.lo;
            double r0 = 0.0, r1 = 0.0, r2 = 0.0;
            for (int j = 0; j < gl15_count; ++j) {
                const UnitPoint vi = panel_point(pan, pan.lo + span * xs[j]);
                const double core = ws[j] * p(vi) * bridge_kernel(vo, vi);
                r0 += core;
                const double ei = e(vi);
                r1 += core * (eo + ei);
                r2 += core * eo * ei;
            }
            d0 += po * span * r0;
            d1 += po * span * r1;
            d2 += po * span * r2;
        }
        t0 += 2.0 * d0;
        t1 += d1;
        t2 += 2.0 * d2;
    }
    return {t0, t1, t2};
}

template <typename P, typename E>
std::array<double, 3> kernel_triple(P&& p, E&& e, const QuadratureSpec& spec) {
    const std::vector<int> depths = depth_sequence(spec.max_depth);
    std::array<double, 3> prev = kernel_triple_at_depth(p, e, depths.front());
    for (std::size_t i = 1; i < depths.size(); ++i) {
        const std::array<double, 3> cur = kernel_triple_at_depth(p, e, depths[i]);
        double err = 0.0, scale = 0.0;
        for (int c = 0; c < 3; ++c) {
            err = std::max(err, std::abs(cur[c] - prev[c]));
            scale = std::max(scale, std::abs(cur[c]));
        }
        prev = cur;
        if (err <= std::max(spec.abs_tol, spec.rel_tol * scale)) return cur;
    }
    throw QuadratureError(nonconvergence_message("kernel_triple", depths.back(),
                                                  prev[0], 0.0));
}

}  // namespace detail

/// Adaptive integral of f over (0,1). f may take a double or a UnitPoint.
/// Open Gauss-Legendre panels on a dyadically graded mesh toward both
/// endpoints; refinement doubles the grading depth until two consecutive
/// levels agree within tolerance. Throws QuadratureError on non-convergence.
template <typename F>
QuadResult integrate_1d_result(F&& f, const QuadratureSpec& spec = {}) {
    const std::vector<int> depths = detail::depth_sequence(spec.max_depth);
    double prev = detail::integrate_panels_1d(f, detail::graded_panels(depths.front()));
    double err = std::abs(prev);
    for (std::size_t i = 1; i < depths.size(); ++i) {
        const double cur = detail::integrate_panels_1d(f, detail::graded_panels(depths[i]));
        err = std::abs(cur - prev);
        prev = cur;
        if (err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(cur)))
            return {cur, err};
    }
    throw QuadratureError(detail::nonconvergence_message("integrate_1d", depths.back(), prev, err));
}

template <typename F>
double integrate_1d(F&& f, const QuadratureSpec& spec = {}) {
    return integrate_1d_result(std::forward<F>(f), spec).value;
}

/// Adaptive integral of g over the open unit square. g takes two UnitPoints
/// (or two doubles). Declaring symmetry halves the work over the triangle
/// v <= w. Diagonal square panels are integrated as two triangles so the
/// bridge-kernel kink along v == w is never straddled by a panel rule.
template <typename G>
QuadResult integrate_2d_result(G&& g, const QuadratureSpec& spec = quadrature_spec_2d(),
                               Symmetry2d sym = Symmetry2d::none) {
    auto gp = [&g](const UnitPoint& v, const UnitPoint& w) {
        if constexpr (std::is_invocable_v<G, const UnitPoint&, const UnitPoint&>)
            return g(v, w);
        else
            return g(v.u, w.u);
    };
    const std::vector<int> depths = detail::depth_sequence(spec.max_depth);
    double prev = detail::integrate_panels_2d(gp, detail::graded_panels(depths.front()), sym);
    double err = std::abs(prev);
    for (std::size_t i = 1; i < depths.size(); ++i) {
        const double cur = detail::integrate_panels_2d(gp, detail::graded_panels(depths[i]), sym);
        err = std::abs(cur - prev);
        prev = cur;
        if (err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(cur)))
            return {cur, err};
    }
    throw QuadratureError(detail::nonconvergence_message("integrate_2d", depths.back(), prev, err));
}

template <typename G>
double integrate_2d(G&& g, const QuadratureSpec& spec = quadrature_spec_2d(),
                    Symmetry2d sym = Symmetry2d::none) {
    return integrate_2d_result(std::forward<G>(g), spec, sym).value;
}

/// alpha(u) = (1/(1-u)) * int_u^1 (1-v) J(v) H'(v) dv, the score-like profile
/// whose squared integral is the single-moment asymptotic variance.
/// Implemented through the substitution v = u + (1-u) t with both point
/// coordinates kept in their accurate representation. For u very close to 0
/// under a strongly singular J H', give the spec a max_depth of roughly
/// 48 + log2(1/u) so the transition scale at v ~ u is resolved.
template <typename FJ, typename FH>
double alpha_profile(FJ&& j_density, FH&& h_prime, const UnitPoint& at,
                     const QuadratureSpec& spec = {}) {
    if (!(at.om > 0.0 && at.om < 1.0) && !(at.u > 0.0 && at.u < 1.0))
        throw std::domain_error("alpha_profile: u must lie in (0,1)");
    auto f = [&](const UnitPoint& t) {
        // v = u + (1-u) t, each coordinate from its accurate side:
        // near v=1 the distance is the exact product (1-u)(1-t)
        const UnitPoint v{at.u + at.om * t.u, at.om * t.om};
        // the transformed integrand is (1-t) J(v) H'(v)
        return t.om * detail::call_point(j_density, v) * detail::call_point(h_prime, v);
    };
    return at.om * integrate_1d(f, spec);
}

template <typename FJ, typename FH>
double alpha_profile(FJ&& j_density, FH&& h_prime, double u, const QuadratureSpec& spec = {}) {
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("alpha_profile: u must lie in (0,1)");
    return alpha_profile(std::forward<FJ>(j_density), std::forward<FH>(h_prime),
                         UnitPoint{u, 1.0 - u}, spec);
}

/// The three quadratic forms of the bridge-kernel semi-inner product
/// <f,g> = int int f(x) g(y) K(x,y) dy dx.
template <typename F1, typename F2>
OmegaForms omega_forms(F1&& f1, F2&& f2, const QuadratureSpec& spec = quadrature_spec_2d()) {
    auto e1 = [&](const UnitPoint& p) { return detail::call_point(f1, p); };
    auto e2 = [&](const UnitPoint& p) { return detail::call_point(f2, p); };
    OmegaForms out{};
    out.omega1 = integrate_2d(
        [&](const UnitPoint& x, const UnitPoint& y) { return e1(x) * e1(y) * bridge_kernel(x, y); },
        spec, Symmetry2d::symmetric);
    out.omega2 = integrate_2d(
        [&](const UnitPoint& x, const UnitPoint& y) {
            return e1(x) * e1(y) * e2(y) * bridge_kernel(x, y);
        },
        spec, Symmetry2d::none);
    out.omega3 = integrate_2d(
        [&](const UnitPoint& x, const UnitPoint& y) {
            return e1(x) * e2(x) * e1(y) * e2(y) * bridge_kernel(x, y);
        },
        spec, Symmetry2d::symmetric);
    return out;
}

}  // namespace kwle

#endif  // KWLE_QUADRATURE_HPP
