#ifndef K3CERT_SYMPLECTIC_HPP
#define K3CERT_SYMPLECTIC_HPP

#include <array>
#include <functional>
#include <vector>

#include "k3cert/surface.hpp"

namespace k3cert {

// ---------------------------------------------------------------------------
// The holomorphic symplectic form, one rational patch formula per
// (chart, pivot) pair: a coordinate wedge divided by the pivot partial.
// Charts 0 and 2 use the cyclic wedge order, charts 1 and 3 the reversed
// one; that orientation flip is what makes the patches glue to a single
// global form.
// ---------------------------------------------------------------------------

struct OmegaPatch {
    ChartId chart;
    int pivot;            // chart-local index 0..2 of the partial in the denominator
    std::array<int, 2> wedge;  // chart-local indices (a, b) of du_a ^ du_b
};

inline OmegaPatch omega_patch(ChartId chart, int pivot) {
    if (pivot < 0 || pivot > 2) throw std::out_of_range("omega_patch: pivot index");
    bool reversed = chart.i % 2 == 1;
    int a = (pivot + 1) % 3, b = (pivot + 2) % 3;
    if (reversed) std::swap(a, b);
    return {chart, pivot, {a, b}};
}

namespace detail {

inline Complex wedge_eval(const OmegaPatch& patch, const std::array<Complex, 3>& v,
                          const std::array<Complex, 3>& w) {
    int a = patch.wedge[0], b = patch.wedge[1];
    return v[static_cast<std::size_t>(a)] * w[static_cast<std::size_t>(b)] -
           v[static_cast<std::size_t>(b)] * w[static_cast<std::size_t>(a)];
}

inline std::array<Complex, 3> chart_gradient(const QuarticSurface& X, ChartId chart,
                                             const std::array<Complex, 3>& u) {
    std::vector<Complex> uv(u.begin(), u.end());
    std::array<Complex, 3> g;
    for (int k = 0; k < 3; ++k)
        g[static_cast<std::size_t>(k)] = X.chart_partial_num(chart.i, k).evaluate(uv);
    return g;
}

inline int max_modulus_index(const std::array<Complex, 3>& g) {
    int best = 0;
    for (int k = 1; k < 3; ++k)
        if (std::abs(g[static_cast<std::size_t>(k)]) > std::abs(g[static_cast<std::size_t>(best)]))
            best = k;
    return best;
}

}  // namespace detail

/// Evaluate the patch formula at chart-local coordinates u on a tangent pair.
inline Complex omega_eval_in_chart(const QuarticSurface& X, ChartId chart,
                                   const std::array<Complex, 3>& u, int pivot,
                                   const std::array<Complex, 3>& v,
                                   const std::array<Complex, 3>& w) {
    std::array<Complex, 3> g = detail::chart_gradient(X, chart, u);
    Complex gp = g[static_cast<std::size_t>(pivot)];
    if (std::abs(gp) < 1e-12)
        throw std::domain_error("omega_eval: pivot partial vanishes");
    return detail::wedge_eval(omega_patch(chart, pivot), v, w) / gp;
}

/// A single evaluation record of the 2-form on a tangent pair.
struct TwoFormSample {
    SurfacePointNum point;
    std::array<Complex, 3> v, w;
    Complex value;
};

/// Evaluate the 2-form at a surface point on a tangent pair, chart and pivot
/// chosen by max modulus. Rejects points off the surface, near-singular
/// points and non-tangent inputs.
inline TwoFormSample omega_eval(const QuarticSurface& X, const SurfacePointNum& p,
                                const std::array<Complex, 3>& v,
                                const std::array<Complex, 3>& w) {
    if (p.residual > 1e-8) throw std::domain_error("omega_eval: point is not on the surface");
    std::array<Complex, 3> u = chart_affine(p, p.chart);
    std::array<Complex, 3> g = detail::chart_gradient(X, p.chart, u);
    double gm = std::max({std::abs(g[0]), std::abs(g[1]), std::abs(g[2])});
    if (gm < 1e-12) throw std::domain_error("omega_eval: near-singular point");
    auto tangency = [&](const std::array<Complex, 3>& t) {
        Complex dot = g[0] * t[0] + g[1] * t[1] + g[2] * t[2];
        double tm = std::max({std::abs(t[0]), std::abs(t[1]), std::abs(t[2]), 1e-300});
        return std::abs(dot) / (gm * tm);
    };
    if (tangency(v) > 1e-8 || tangency(w) > 1e-8)
        throw std::domain_error("omega_eval: inputs are not tangent");
    int pivot = detail::max_modulus_index(g);
    TwoFormSample s;
    s.point = p;
    s.v = v;
    s.w = w;
    s.value = detail::wedge_eval(omega_patch(p.chart, pivot), v, w) /
              g[static_cast<std::size_t>(pivot)];
    return s;
}

/// Evaluate the form with every admissible pivot of the point's chart on the
/// frame pair (V1, V2) and return the max pairwise relative deviation; the
/// patch formulas agree on tangent pairs, so the prediction is zero.
inline double pivot_consistency(const QuarticSurface& X, const SurfacePointNum& p) {
    TangentFrame fr = tangent_frame(X, p);
    std::array<Complex, 3> u = chart_affine(p, fr.chart);
    std::array<Complex, 3> g = detail::chart_gradient(X, fr.chart, u);
    double gm = std::max({std::abs(g[0]), std::abs(g[1]), std::abs(g[2])});
    std::vector<Complex> values;
    for (int q = 0; q < 3; ++q) {
        if (std::abs(g[static_cast<std::size_t>(q)]) <= 1e-8 * std::max(1.0, gm)) continue;
        values.push_back(detail::wedge_eval(omega_patch(fr.chart, q), fr.V1, fr.V2) /
                         g[static_cast<std::size_t>(q)]);
    }
    if (values.size() < 2)
        throw std::domain_error("pivot_consistency: fewer than two admissible pivots");
    double scale = 0, dev = 0;
    for (const auto& x : values) scale = std::max(scale, std::abs(x));
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j)
            dev = std::max(dev, std::abs(values[i] - values[j]));
    return dev / std::max(scale, 1e-300);
}

/// Push the chart-A frame pair through the transition differential and
/// evaluate the form in both charts; returns the relative difference.
inline double overlap_consistency(const QuarticSurface& X, const SurfacePointNum& p,
                                  ChartId chartA, ChartId chartB) {
    double mx = 0;
    for (const auto& c : p.coords) mx = std::max(mx, std::abs(c));
    if (std::abs(p.coords[static_cast<std::size_t>(chartA.i)]) < 1e-6 * mx ||
        std::abs(p.coords[static_cast<std::size_t>(chartB.i)]) < 1e-6 * mx)
        throw std::domain_error("overlap_consistency: point outside a chart");
    if (chartA.i == chartB.i) return 0.0;

    TangentFrame fr = tangent_frame_in_chart(X, p, chartA);
    std::array<Complex, 3> uA = chart_affine(p, chartA);
    std::array<Complex, 3> gA = detail::chart_gradient(X, chartA, uA);
    Complex omegaA = detail::wedge_eval(omega_patch(chartA, detail::max_modulus_index(gA)),
                                        fr.V1, fr.V2) /
                     gA[static_cast<std::size_t>(detail::max_modulus_index(gA))];

    AffineCoordsC a{chartA, {uA[0], uA[1], uA[2]}};
    auto jac = transition_jacobian(a, chartB);
    auto push = [&](const std::array<Complex, 3>& t) {
        std::array<Complex, 3> out{};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                out[static_cast<std::size_t>(r)] +=
                    jac[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] *
                    t[static_cast<std::size_t>(c)];
        return out;
    };
    std::array<Complex, 3> uB = chart_affine(p, chartB);
    std::array<Complex, 3> gB = detail::chart_gradient(X, chartB, uB);
    int pivB = detail::max_modulus_index(gB);
    Complex omegaB = detail::wedge_eval(omega_patch(chartB, pivB), push(fr.V1), push(fr.V2)) /
                     gB[static_cast<std::size_t>(pivB)];

    return std::abs(omegaA - omegaB) / std::max({std::abs(omegaA), std::abs(omegaB), 1e-300});
}

/// Coefficient of dz^dzbar in the pullback of the form along a parametrized
/// disk into a chart: (d psi_a dbar psi_b - d psi_b dbar psi_a) / f_pivot,
/// with (a, b) the pivot's wedge pair and derivatives by central differences.
inline std::vector<Complex> pullback_on_disk(
    const QuarticSurface& X, ChartId chart,
    const std::function<std::array<Complex, 3>(Complex)>& psi,
    const std::vector<Complex>& gridpoints, double step = 1e-5) {
    std::vector<Complex> out;
    out.reserve(gridpoints.size());
    for (Complex z : gridpoints) {
        std::array<Complex, 3> u = psi(z);
        // membership via the chart equation, relative to coordinate scale
        std::vector<Complex> uv(u.begin(), u.end());
        double um = std::max({std::abs(u[0]), std::abs(u[1]), std::abs(u[2]), 1.0});
        double res = std::abs(X.chart_eq_num(chart.i).evaluate(uv)) /
                     (std::max(1.0, X.chart_eq_num(chart.i).max_coeff_abs()) * um * um * um * um);
        if (res > 1e-6)
            throw std::domain_error("pullback_on_disk: map leaves the surface");
        std::array<Complex, 3> g = detail::chart_gradient(X, chart, u);
        int pivot = detail::max_modulus_index(g);
        if (std::abs(g[static_cast<std::size_t>(pivot)]) < 1e-12)
            throw std::domain_error("pullback_on_disk: near-singular image point");
        OmegaPatch patch = omega_patch(chart, pivot);
        const Complex ih(0, step);
        std::array<Complex, 3> px = psi(z + step), mx = psi(z - step);
        std::array<Complex, 3> py = psi(z + ih), my = psi(z - ih);
        auto d_dbar = [&](int k) {
            Complex dx = (px[static_cast<std::size_t>(k)] - mx[static_cast<std::size_t>(k)]) /
                         (2 * step);
            Complex dy = (py[static_cast<std::size_t>(k)] - my[static_cast<std::size_t>(k)]) /
                         (2 * step);
            Complex del = (dx - Complex(0, 1) * dy) / 2.0;
            Complex dbar = (dx + Complex(0, 1) * dy) / 2.0;
            return std::pair<Complex, Complex>(del, dbar);
        };
        auto [da, dbara] = d_dbar(patch.wedge[0]);
        auto [db, dbarb] = d_dbar(patch.wedge[1]);
        out.push_back((da * dbarb - db * dbara) / g[static_cast<std::size_t>(pivot)]);
    }
    return out;
}

}  // namespace k3cert

#endif
