#pragma once

// r(z) = (z - conj(P(z)), h(z)): the lateral correction that turns the
// harmonic graph of h into an exact minimal surface.

#include <helimin/detail/cauchy.hpp>
#include <helimin/field.hpp>

#include <algorithm>
#include <array>
#include <optional>
#include <span>

namespace helimin {

/// Stereographic Gauss map value; `infinite` marks the north pole.
struct GaussMapValue {
    Complex value;
    bool infinite = false;

    double modulus() const { return infinite ? std::numeric_limits<double>::infinity() : std::abs(value); }
};

struct ImmersedSample {
    Complex z;
    Vec3 position;
    Vec3 normal;
    GaussMapValue g;
    double K = 0.0;
    double area_weight = 1.0;
    bool in_omega_N = false;
};

inline Vec3 immerse(const MotifField& f, Complex z, double h_value)
{
    const auto jet = eval_jet(f, z);
    const Complex w = z - std::conj(jet.P);
    return {w.real(), w.imag(), h_value};
}

inline Vec3 immerse(const MotifField& f, Complex z) { return immerse(f, z, eval_jet(f, z).h); }

inline GaussMapValue gauss_map_from_hz(Complex hz)
{
    if (hz == Complex(0.0)) return {0.0, true};
    return {-1.0 / hz, false};
}

inline GaussMapValue gauss_map(const MotifField& f, Complex z) { return gauss_map_from_hz(eval_hz(f, z)); }

/// Inverse stereographic projection from the south-pole chart.
inline Vec3 inverse_stereographic(const GaussMapValue& g)
{
    if (g.infinite) return {0.0, 0.0, 1.0};
    const Complex w = g.value;
    const double n = std::norm(w);
    if (n > 1e300) return {0.0, 0.0, 1.0};
    return {2.0 * w.real() / (1.0 + n), 2.0 * w.imag() / (1.0 + n), (n - 1.0) / (n + 1.0)};
}

inline GaussMapValue stereographic(const Vec3& N)
{
    if (N.z >= 1.0) return {0.0, true};
    return {Complex(N.x, N.y) / (1.0 - N.z), false};
}

/// Normal written directly in hz, so hz = 0 needs no special case.
inline Vec3 normal_from_hz(Complex hz)
{
    const double a = std::norm(hz);
    return Vec3{-2.0 * hz.real(), 2.0 * hz.imag(), 1.0 - a} * (1.0 / (1.0 + a));
}

inline Vec3 unit_normal(const MotifField& f, Complex z) { return normal_from_hz(eval_hz(f, z)); }

inline double area_weight_from_hz(Complex hz)
{
    const double a = 1.0 + std::norm(hz);
    return a * a;
}

inline double area_weight(const MotifField& f, Complex z) { return area_weight_from_hz(eval_hz(f, z)); }

inline double curvature_from_jet(Complex hz, Complex hzz)
{
    const double a = 1.0 + std::norm(hz);
    return -4.0 * std::norm(hzz) / (a * a * a * a);
}

inline double curvature_exact(const MotifField& f, Complex z)
{
    const auto jet = eval_jet(f, z);
    return curvature_from_jet(jet.hz, jet.hzz);
}

/// |g| >= 1, i.e. |hz| <= 1.
inline bool in_omega_N(Complex hz) { return std::norm(hz) <= 1.0; }

inline ImmersedSample sample_immersion(const MotifField& f, Complex z, std::optional<double> h_value = std::nullopt)
{
    const auto jet = eval_jet(f, z);
    ImmersedSample s;
    s.z = z;
    const Complex w = z - std::conj(jet.P);
    s.position = {w.real(), w.imag(), h_value.value_or(jet.h)};
    s.normal = normal_from_hz(jet.hz);
    s.g = gauss_map_from_hz(jet.hz);
    s.K = curvature_from_jet(jet.hz, jet.hzz);
    s.area_weight = area_weight_from_hz(jet.hz);
    s.in_omega_N = in_omega_N(jet.hz);
    return s;
}

struct EnneperReport {
    double max_residual = 0.0;          // max |L'P' - hz^2| with L = z
    double max_relative_residual = 0.0; // same, over 1 + |hz|^2
    double min_regularity = std::numeric_limits<double>::infinity(); // min |L'| + |P'|
    std::size_t samples = 0;
};

/// P' is taken by a contour derivative of the supplied P, so it does not
/// reuse the closed form hz^2. `radius(z)` bounds the disc where P is holomorphic.
template <class PFn, class HzFn, class RadiusFn>
EnneperReport check_enneper_conditions(PFn&& P, HzFn&& hz, RadiusFn&& radius, std::span<const Complex> points)
{
    EnneperReport r;
    for (const Complex z : points) {
        const double rho = 0.25 * radius(z);
        const Complex dP = detail::cauchy_derivative(P, z, rho);
        const Complex h = hz(z);
        const double res = std::abs(dP - h * h);
        r.max_residual = std::max(r.max_residual, res);
        r.max_relative_residual = std::max(r.max_relative_residual, res / (1.0 + std::norm(h)));
        r.min_regularity = std::min(r.min_regularity, 1.0 + std::abs(dP));
        ++r.samples;
    }
    return r;
}

inline EnneperReport check_enneper_conditions(const MotifField& f, std::span<const Complex> points)
{
    for (const Complex z : points) require_regular(f, z);
    return check_enneper_conditions([&](Complex w) { return detail::jet_unchecked(f, w).P; },
        [&](Complex w) { return detail::hz_unchecked(f, w); },
        [&](Complex w) { return detail::distance_to_P_cuts(f, w); }, points);
}

struct WeierstrassData {
    Complex f;
    GaussMapValue g;
};

inline WeierstrassData weierstrass_data(const MotifField& field, Complex z)
{
    const Complex hz = eval_hz(field, z);
    return {-2.0 * hz * hz, gauss_map_from_hz(hz)};
}

/// phi_1 = f(1 - g^2)/2, phi_2 = i f(1 + g^2)/2, phi_3 = f g.
inline std::array<Complex, 3> weierstrass_phi(Complex f, Complex g)
{
    return {0.5 * f * (1.0 - g * g), 0.5 * I * f * (1.0 + g * g), f * g};
}

/// K = -[4|g'| / (|f| (1 + |g|^2)^2)]^2 with g' = hzz / hz^2 and hzz taken
/// from a contour derivative of hz.
inline double weierstrass_curvature(const MotifField& field, Complex z)
{
    require_regular(field, z);
    const Complex hz = detail::hz_unchecked(field, z);
    if (hz == Complex(0.0)) return curvature_exact(field, z);
    const double rho = 0.25 * field.distance_to_sites(z);
    const Complex hzz = detail::cauchy_derivative([&](Complex w) { return detail::hz_unchecked(field, w); }, z, rho);
    const Complex f = -2.0 * hz * hz;
    const Complex g = -1.0 / hz;
    const Complex dg = hzz / (hz * hz);
    const double q = 4.0 * std::abs(dg) / (std::abs(f) * (1.0 + std::norm(g)) * (1.0 + std::norm(g)));
    return -q * q;
}

} // namespace helimin
