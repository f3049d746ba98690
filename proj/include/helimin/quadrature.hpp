#pragma once

// Area and total curvature by iterated Gauss-Kronrod quadrature in the
// parameter plane. Each inner line is split where it crosses |hz| = 1 so the
// Omega_N restriction never puts a jump inside a quadrature panel.

#include <helimin/immersion.hpp>
#include <helimin/multipole.hpp>
#include <helimin/region.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <functional>

namespace helimin {

struct QuadratureResult {
    double value = 0.0;          // includes the tail
    double tail_estimate = 0.0;  // analytic contribution beyond the truncation
    double error_estimate = 0.0; // quadrature error, excluding tail model error
};

struct QuadratureOptions {
    double tolerance = 1e-10; // relative
    bool omega_N_only = false;
    int max_depth = 20;
};

namespace detail {

using Integrand = std::function<double(Complex hz, Complex hzz)>;

inline double pitch_floor(const MotifField& f)
{
    if (f.is_chain()) return std::abs(f.pitch());
    double m = std::numeric_limits<double>::infinity();
    for (const auto& q : f.motifs()) m = std::min(m, std::abs(q.pitch));
    return m;
}

/// log|hz| along the line, with sites mapped to a large positive value.
inline double log_hz(const MotifField& f, Complex z)
{
    const double a = std::abs(hz_unchecked(f, z));
    if (!(a < 1e300)) return 700.0;
    if (a == 0.0) return -700.0;
    return std::log(a);
}

/// Integral of F(z(t)) |z'(t)| w(t) over [a, b] along z(t), optionally
/// restricted to |hz| <= 1.
inline double line_integral(const MotifField& f, const std::function<Complex(double)>& path, double a, double b,
    const std::function<double(double)>& weight, const Integrand& F, const QuadratureOptions& opt,
    double speed, double* error)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    std::vector<double> cuts{a};
    if (opt.omega_N_only) {
        const double length = (b - a) * speed;
        const int n = std::max(64, static_cast<int>(std::ceil(length / (pitch_floor(f) / 8.0))));
        auto phi = [&](double t) { return log_hz(f, path(t)); };
        std::vector<double> t(n + 1), v(n + 1);
        for (int i = 0; i <= n; ++i) {
            t[i] = a + (b - a) * i / n;
            v[i] = phi(t[i]);
        }
        auto root = [&](double t0, double t1, double v0, double v1) {
            if (v0 == 0.0) return t0;
            if (v1 == 0.0) return t1;
            std::uintmax_t iters = 200;
            const auto r = boost::math::tools::toms748_solve(
                phi, t0, t1, v0, v1, boost::math::tools::eps_tolerance<double>(52), iters);
            return 0.5 * (r.first + r.second);
        };
        for (int i = 1; i <= n; ++i) {
            if ((v[i - 1] > 0.0) != (v[i] > 0.0)) cuts.push_back(root(t[i - 1], t[i], v[i - 1], v[i]));
            // a line can clip a core (or a gap between cores) between two samples
            // without a sign change; look for it around sampled extrema
            if (i == n) continue;
            const bool peak = v[i] >= v[i - 1] && v[i] >= v[i + 1] && v[i] <= 0.0;
            const bool dip = v[i] <= v[i - 1] && v[i] <= v[i + 1] && v[i] > 0.0;
            if (!peak && !dip) continue;
            const double sign = peak ? -1.0 : 1.0;
            std::uintmax_t iters = 100;
            const auto ext = boost::math::tools::brent_find_minima(
                [&](double x) { return sign * phi(x); }, t[i - 1], t[i + 1], 52, iters);
            const double ve = sign * ext.second;
            if ((ve > 0.0) == (v[i] > 0.0)) continue;
            cuts.push_back(root(t[i - 1], ext.first, v[i - 1], ve));
            cuts.push_back(root(ext.first, t[i + 1], ve, v[i + 1]));
        }
        std::sort(cuts.begin(), cuts.end());
    }
    cuts.push_back(b);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double t0 = cuts[i], t1 = cuts[i + 1];
        if (!(t1 > t0)) continue;
        if (opt.omega_N_only && log_hz(f, path(0.5 * (t0 + t1))) > 0.0) continue;
        auto g = [&](double t) {
            const auto jet = jet_unchecked(f, path(t));
            return F(jet.hz, jet.hzz) * weight(t) * speed;
        };
        double err = 0.0;
        total += GK::integrate(g, t0, t1, opt.max_depth, 0.1 * opt.tolerance, &err);
        if (error) *error += err;
    }
    return total;
}

inline void require_sites_excluded(const MotifField& f, const Region& region, const QuadratureOptions& opt)
{
    if (opt.omega_N_only) return;
    const auto box = bounding_box(region);
    for (const auto& s : f.sites_in(box.x0, box.x1, box.y0, box.y1))
        if (contains(region, s.center))
            fail(ErrorCode::SingularPoint,
                "region contains a motif site where the area density diverges; restrict to Omega_N");
}

/// Outer integral split into panels no wider than a quarter pitch when the
/// inner lines are clipped: a line grazing a core boundary puts a square-root
/// kink in the outer integrand, and small panels keep the error estimate honest.
template <class G>
double outer_integral(const MotifField& f, G&& g, double a, double b, const QuadratureOptions& opt, double* error)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    const int panels = opt.omega_N_only ? std::max(1, static_cast<int>(std::ceil((b - a) / (0.25 * pitch_floor(f))))) : 1;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        double err = 0.0;
        total += GK::integrate(g, a + (b - a) * i / panels, a + (b - a) * (i + 1) / panels, opt.max_depth,
            opt.tolerance, &err);
        *error += err;
    }
    return total;
}

inline QuadratureResult integrate_region(
    const MotifField& f, const Region& region, const Integrand& F, const QuadratureOptions& opt)
{
    validate(region);
    require_sites_excluded(f, region, opt);
    QuadratureResult out;
    double inner_error = 0.0;
    std::visit(
        [&](const auto& r) {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, Rectangle>) {
                auto G = [&](double y) {
                    const auto path = [&](double x) { return Complex(x, y); };
                    return line_integral(f, path, r.x0, r.x1, [](double) { return 1.0; }, F, opt, 1.0, &inner_error);
                };
                out.value = outer_integral(f, G, r.y0, r.y1, opt, &out.error_estimate);
            } else {
                Complex c;
                double r0 = 0.0, r1 = 0.0;
                if constexpr (std::is_same_v<R, Disc>) {
                    c = r.center;
                    r1 = r.radius;
                } else {
                    c = r.center;
                    r0 = r.r_inner;
                    r1 = r.r_outer;
                }
                auto G = [&](double rho) {
                    const auto path = [&](double t) { return c + std::polar(rho, t); };
                    // dA = rho drho dtheta; the theta line has unit speed in t
                    return line_integral(
                        f, path, 0.0, 2.0 * pi, [rho](double) { return rho; }, F, opt, 1.0, &inner_error);
                };
                out.value = outer_integral(f, G, r0, r1, opt, &out.error_estimate);
            }
        },
        region);
    return out;
}

inline double area_density(Complex hz, Complex) { return area_weight_from_hz(hz); }

inline double curvature_density(Complex hz, Complex hzz)
{
    const double w = 1.0 + std::norm(hz);
    return -4.0 * std::norm(hzz) / (w * w);
}

} // namespace detail

/// Surface area over the parameter region. Regions containing a site are
/// rejected unless restricted to Omega_N, since the density grows like r^-4.
inline QuadratureResult integrate_area(const MotifField& f, const Region& region, double tolerance = 1e-10,
    bool omega_N_only = false)
{
    QuadratureOptions opt;
    opt.tolerance = tolerance;
    opt.omega_N_only = omega_N_only;
    return detail::integrate_region(f, region, detail::area_density, opt);
}

/// Integral of K dA over region intersected with Omega_N.
inline QuadratureResult total_curvature(const MotifField& f, const Region& region, double tolerance = 1e-8)
{
    QuadratureOptions opt;
    opt.tolerance = tolerance;
    opt.omega_N_only = true;
    return detail::integrate_region(f, region, detail::curvature_density, opt);
}

/// Total curvature of the whole Omega_N for finite fields (a disc plus the
/// multipole tail), or of the strip [0, 2l] x R for chains (a truncated strip
/// plus the exponential tails at both ends).
inline QuadratureResult total_curvature_unbounded(const MotifField& f, double tolerance = 1e-6)
{
    const double target = 0.1 * tolerance;
    if (f.is_chain()) {
        const double l = f.spacing();
        const double k = pi / l;
        // |hzz|^2 decays like exp(-4k|y|) on the TGB strip and exp(-2k|y|) on the UtGB strip
        const double decay = f.kind() == FieldKind::Tgb ? 4.0 * k : 2.0 * k;
        QuadratureOptions opt;
        opt.tolerance = 1e-10;
        opt.omega_N_only = true;
        auto edge = [&](double y) {
            const auto path = [y](double x) { return Complex(x, y); };
            return detail::line_integral(
                f, path, 0.0, 2.0 * l, [](double) { return 1.0; }, detail::curvature_density, opt, 1.0, nullptr);
        };
        double Y = l;
        double tail = 0.0;
        for (int it = 0; it < 60; ++it) {
            tail = (edge(Y) + edge(-Y)) / decay;
            if (std::abs(tail) < target) break;
            Y *= 1.25;
        }
        auto body = total_curvature(f, Rectangle{0.0, 2.0 * l, -Y, Y}, 1e-10);
        body.tail_estimate = tail;
        body.value += tail;
        return body;
    }
    const auto m = multipole(f, 8);
    // leading far-field term of h_z = -(1/2i) sum_k b_k z^{-k-1}, b_0 = -p, b_k = k c_k
    int order = -1;
    double bm = 0.0;
    if (std::abs(m.total_pitch) > 1e-14 * f.max_abs_pitch()) {
        order = 0;
        bm = std::abs(m.total_pitch);
    } else {
        for (int j = 1; j <= 8; ++j)
            if (std::abs(m.coefficients[j - 1]) > 1e-14 * f.length_scale() * f.max_abs_pitch()) {
                order = j;
                bm = j * std::abs(m.coefficients[j - 1]);
                break;
            }
    }
    double Rmax = std::max(10.0 * m.convergence_radius, 10.0 * f.max_abs_pitch());
    auto tail_of = [&](double R) {
        if (order < 0) return 0.0;
        return -pi * (order + 1) * bm * bm / std::pow(R, 2 * order + 2);
    };
    for (int it = 0; it < 200 && std::abs(tail_of(Rmax)) >= target; ++it) Rmax *= 1.5;
    auto body = total_curvature(f, Disc{0.0, Rmax}, 1e-10);
    body.tail_estimate = tail_of(Rmax);
    body.value += body.tail_estimate;
    return body;
}

} // namespace helimin
