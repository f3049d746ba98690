#pragma once

// Monge patches (x, y, h(x, y)): curvature of harmonic graphs, and the
// converse construction that rewrites a minimal graph in Enneper form.

#include <helimin/field.hpp>

#include <boost/numeric/odeint.hpp>

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace helimin {

struct GraphDerivatives {
    double hx = 0.0;
    double hy = 0.0;
    double hxx = 0.0;
    double hxy = 0.0;
    double hyy = 0.0;
};

/// Height function with optional analytic derivatives. Without them,
/// derivatives come from Richardson-extrapolated central differences, so `height`
/// must be smooth (single-valued) on the stencil around each query point.
struct GraphField {
    std::function<double(Complex)> height;
    std::function<GraphDerivatives(Complex)> derivatives;
    double fd_step = 1e-5;
    double length_scale = 1.0;
};

inline GraphDerivatives graph_derivatives(const GraphField& gf, Complex z)
{
    require_finite(z, "graph point");
    if (gf.derivatives) return gf.derivatives(z);
    if (!(gf.fd_step > 0.0)) fail(ErrorCode::InvalidArgument, "finite-difference step must be positive");
    const double h0 = gf.height(z);
    auto at = [&](double dx, double dy) { return gf.height(z + Complex(dx, dy)) - h0; };
    auto stencil = [&](double s) {
        GraphDerivatives d;
        d.hx = (at(s, 0) - at(-s, 0)) / (2 * s);
        d.hy = (at(0, s) - at(0, -s)) / (2 * s);
        d.hxx = (at(s, 0) + at(-s, 0)) / (s * s);
        d.hyy = (at(0, s) + at(0, -s)) / (s * s);
        d.hxy = (at(s, s) - at(s, -s) - at(-s, s) + at(-s, -s)) / (4 * s * s);
        return d;
    };
    const double s = gf.fd_step * gf.length_scale;
    // second derivatives need a wider base step to keep round-off in check
    const GraphDerivatives a = stencil(s), b = stencil(2 * s);
    const GraphDerivatives c = stencil(100 * s), e = stencil(200 * s);
    auto rich = [](double fine, double coarse) { return (4.0 * fine - coarse) / 3.0; };
    return {rich(a.hx, b.hx), rich(a.hy, b.hy), rich(c.hxx, e.hxx), rich(c.hxy, e.hxy), rich(c.hyy, e.hyy)};
}

/// The undeformed harmonic graph of a motif field, with exact derivatives:
/// hx = 2 Re hz, hy = -2 Im hz, hxx = 2 Re hzz, hxy = -2 Im hzz.
inline GraphField harmonic_graph(const MotifField& f)
{
    GraphField gf;
    gf.height = [f](Complex z) { return eval_jet(f, z).h; };
    gf.derivatives = [f](Complex z) {
        const auto jet = eval_jet(f, z);
        GraphDerivatives d;
        d.hx = 2.0 * jet.hz.real();
        d.hy = -2.0 * jet.hz.imag();
        d.hxx = 2.0 * jet.hzz.real();
        d.hxy = -2.0 * jet.hzz.imag();
        d.hyy = -d.hxx;
        return d;
    };
    gf.length_scale = f.length_scale();
    return gf;
}

inline double mean_curvature(const GraphDerivatives& d)
{
    const double w = 1.0 + d.hx * d.hx + d.hy * d.hy;
    return ((1.0 + d.hx * d.hx) * d.hyy - 2.0 * d.hx * d.hy * d.hxy + (1.0 + d.hy * d.hy) * d.hxx)
        / (2.0 * w * std::sqrt(w));
}

inline double gaussian_curvature(const GraphDerivatives& d)
{
    const double w = 1.0 + d.hx * d.hx + d.hy * d.hy;
    return (d.hxx * d.hyy - d.hxy * d.hxy) / (w * w);
}

inline double graph_mean_curvature(const GraphField& gf, Complex z) { return mean_curvature(graph_derivatives(gf, z)); }

inline double graph_gaussian_curvature(const GraphField& gf, Complex z)
{
    return gaussian_curvature(graph_derivatives(gf, z));
}

/// |H| / sqrt(-K); 0 when both vanish, +inf when K >= 0 but H does not.
inline double dimensionless_deviation(const GraphField& gf, Complex z)
{
    const auto d = graph_derivatives(gf, z);
    const double H = mean_curvature(d), K = gaussian_curvature(d);
    if (std::abs(H) < 1e-14 && std::abs(K) < 1e-14) return 0.0;
    if (K >= 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(H) / std::sqrt(-K);
}

/// Polynomial (Neville) extrapolation to t = 0 of samples (t_k, v_k).
inline double extrapolate_to_zero(std::span<const double> t, std::span<const double> v)
{
    std::vector<double> p(v.begin(), v.end());
    const std::size_t n = p.size();
    for (std::size_t m = 1; m < n; ++m)
        for (std::size_t i = 0; i + m < n; ++i)
            p[i] = (t[i + m] * p[i] - t[i] * p[i + 1]) / (t[i + m] - t[i]);
    return p.empty() ? 0.0 : p[0];
}

struct DeviationLimit {
    double limit = 0.0;
    std::vector<double> offsets;
    std::vector<double> values;
};

/// Limit of the dimensionless deviation as `point + t * direction` approaches `point`.
inline DeviationLimit deviation_limit(const GraphField& gf, Complex point, Complex direction,
    std::span<const double> offsets)
{
    DeviationLimit out;
    for (double t : offsets) {
        out.offsets.push_back(t);
        out.values.push_back(dimensionless_deviation(gf, point + t * direction));
    }
    out.limit = extrapolate_to_zero(out.offsets, out.values);
    return out;
}

/// Mean curvature of the harmonic dipole graph (p at R/2, -p at -R/2) as
/// -p^3 R^3 y / (C^(1/2) (C + p^2 R^2)^(3/2)), C = |z - R/2|^2 |z + R/2|^2.
inline double dipole_graph_mean_curvature(double p, double R, Complex z)
{
    const double x = z.real(), y = z.imag();
    const double C = ((x - R / 2) * (x - R / 2) + y * y) * ((x + R / 2) * (x + R / 2) + y * y);
    const double q = C + p * p * R * R;
    return -p * p * p * R * R * R * y / (std::sqrt(C) * q * std::sqrt(q));
}

// ---- converse construction --------------------------------------------------

/// h_zeta = (hx - i hy) / 2.
inline Complex h_zeta(const GraphDerivatives& d) { return 0.5 * Complex(d.hx, -d.hy); }

/// The "plus" root (1 + 2a + sqrt(1 + 4a)) / (2 conj(h_zeta)^2), a = |h_zeta|^2.
inline Complex plus_root_B(Complex hzeta)
{
    const double a = std::norm(hzeta);
    const Complex c = std::conj(hzeta);
    return (1.0 + 2.0 * a + std::sqrt(1.0 + 4.0 * a)) / (2.0 * c * c);
}

struct OdeState {
    Complex zeta;
    Complex P;
    Complex B;
    double jacobian = 0.0; // 1 / (1 - |B|^2)
    Complex z;             // zeta + conj(P)
};

struct GraphToEnneperOptions {
    double minimality_tolerance = 1e-8; // on |H| * length_scale
    double gradient_floor = 1e-12;      // on |h_zeta|
    double abs_tol = 1e-13;
    double rel_tol = 1e-13;
    int gate_samples_per_segment = 16;
};

/// Integrates dP = P_zeta dzeta + P_zetabar dzetabar with
/// P_zeta = B / (1 - |B|^2), P_zetabar = |B|^2 / (1 - |B|^2) along a polyline
/// starting at P(path[0]) = P_base. One state per polyline vertex.
inline std::vector<OdeState> graph_to_enneper(const GraphField& gf, std::span<const Complex> path, Complex P_base,
    const GraphToEnneperOptions& opt = {})
{
    if (path.empty()) fail(ErrorCode::InvalidArgument, "graph_to_enneper needs a nonempty path");
    auto B_at = [&](Complex zeta) {
        const auto d = graph_derivatives(gf, zeta);
        const Complex hz = h_zeta(d);
        if (!(std::abs(hz) >= opt.gradient_floor))
            fail(ErrorCode::SingularGradient, "graph gradient vanishes on the path");
        return plus_root_B(hz);
    };
    auto gate = [&](Complex zeta) {
        const auto d = graph_derivatives(gf, zeta);
        if (!(std::abs(mean_curvature(d)) * gf.length_scale < opt.minimality_tolerance))
            fail(ErrorCode::NotMinimal, "graph is not minimal along the path");
        if (!(std::abs(h_zeta(d)) >= opt.gradient_floor))
            fail(ErrorCode::SingularGradient, "graph gradient vanishes on the path");
    };
    auto make_state = [&](Complex zeta, Complex P) {
        const Complex B = B_at(zeta);
        return OdeState{zeta, P, B, 1.0 / (1.0 - std::norm(B)), zeta + std::conj(P)};
    };

    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        for (int k = 0; k < opt.gate_samples_per_segment; ++k)
            gate(path[i] + (path[i + 1] - path[i]) * (static_cast<double>(k) / opt.gate_samples_per_segment));
    gate(path.back());

    namespace odeint = boost::numeric::odeint;
    using Stepper = odeint::runge_kutta_dopri5<Complex, double, Complex, double>;

    std::vector<OdeState> out;
    out.push_back(make_state(path[0], P_base));
    Complex P = P_base;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const Complex a = path[i], dz = path[i + 1] - path[i];
        if (dz == Complex(0.0)) {
            out.push_back(make_state(path[i + 1], P));
            continue;
        }
        auto rhs = [&](const Complex&, Complex& dPdt, double t) {
            const Complex B = B_at(a + t * dz);
            const double den = 1.0 - std::norm(B);
            dPdt = (B * dz + std::norm(B) * std::conj(dz)) / den;
            if (!is_finite(dPdt)) fail(ErrorCode::SingularGradient, "P derivative blew up on the path");
        };
        odeint::integrate_adaptive(odeint::make_controlled(opt.abs_tol, opt.rel_tol, Stepper()), rhs, P, 0.0, 1.0, 1e-3);
        out.push_back(make_state(path[i + 1], P));
    }
    return out;
}

struct IntegrabilityResidual {
    Complex finite_difference; // d/dzetabar P_zeta - d/dzeta P_zetabar
    Complex stated_form;       // (1 + 4a) H / (2 h_zeta conj(h_zeta)^2 (1 - |B|^2))
    Complex exact_form;        // stated_form * 2|B|^2 / (|B|^2 - 1)
    double H = 0.0;
};

/// Solvability defect of the P system for a (possibly non-minimal) graph.
/// The finite-difference value uses the Wirtinger operators on P_zeta and
/// P_zetabar built from graph derivatives at neighbouring points.
inline IntegrabilityResidual integrability_residual(const GraphField& gf, Complex zeta, double step)
{
    auto rates = [&](Complex w) {
        const Complex B = plus_root_B(h_zeta(graph_derivatives(gf, w)));
        const double den = 1.0 - std::norm(B);
        return std::pair<Complex, Complex>{B / den, std::norm(B) / den};
    };
    auto ddx = [&](int which, double e) {
        const auto p = rates(zeta + e), m = rates(zeta - e);
        return which == 0 ? (p.first - m.first) / (2 * e) : (p.second - m.second) / (2 * e);
    };
    auto ddy = [&](int which, double e) {
        const auto p = rates(zeta + I * e), m = rates(zeta - I * e);
        return which == 0 ? (p.first - m.first) / (2 * e) : (p.second - m.second) / (2 * e);
    };
    auto richardson = [&](auto&& d, int which) { return (4.0 * d(which, step) - d(which, 2 * step)) / 3.0; };
    const Complex dx0 = richardson(ddx, 0), dy0 = richardson(ddy, 0);
    const Complex dx1 = richardson(ddx, 1), dy1 = richardson(ddy, 1);
    IntegrabilityResidual r;
    r.finite_difference = 0.5 * (dx0 + I * dy0) - 0.5 * (dx1 - I * dy1);

    const auto d = graph_derivatives(gf, zeta);
    const Complex hz = h_zeta(d);
    const double a = std::norm(hz);
    const Complex B = plus_root_B(hz);
    const double nb = std::norm(B);
    r.H = mean_curvature(d);
    r.stated_form = (1.0 + 4.0 * a) * r.H / (2.0 * hz * std::conj(hz) * std::conj(hz) * (1.0 - nb));
    r.exact_form = r.stated_form * (2.0 * nb / (nb - 1.0));
    return r;
}

} // namespace helimin
