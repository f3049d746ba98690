#pragma once

// Harmonic height fields built from helical motifs, their Wirtinger
// derivatives, and the Enneper correction P with P' = (dh/dz)^2.

#include <helimin/detail/trig.hpp>
#include <helimin/types.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace helimin {

struct HelicalMotif {
    Complex center;
    double pitch = 0.0;
};

enum class FieldKind { Finite, Tgb, Utgb };

constexpr const char* to_string(FieldKind kind)
{
    switch (kind) {
    case FieldKind::Finite: return "finite";
    case FieldKind::Tgb: return "tgb";
    case FieldKind::Utgb: return "utgb";
    }
    return "unknown";
}

/// A finite set of motifs, or an infinite chain of sites n*spacing on the
/// real axis (TGB: all of pitch p; UtGB: alternating p, -p starting with +p at 0).
class MotifField {
public:
    static MotifField finite(std::vector<HelicalMotif> motifs)
    {
        if (motifs.empty()) fail(ErrorCode::InvalidArgument, "a finite motif field needs at least one motif");
        for (const auto& m : motifs) {
            require_finite(m.center, "motif center");
            if (!std::isfinite(m.pitch) || m.pitch == 0.0)
                fail(ErrorCode::InvalidArgument, "motif pitch must be finite and nonzero");
        }
        for (std::size_t i = 0; i < motifs.size(); ++i)
            for (std::size_t j = i + 1; j < motifs.size(); ++j)
                if (motifs[i].center == motifs[j].center)
                    fail(ErrorCode::DegenerateGeometry,
                        "motifs " + std::to_string(i) + " and " + std::to_string(j) + " share a center");
        MotifField f(FieldKind::Finite);
        f.m_motifs = std::move(motifs);
        double scale = 0.0;
        for (std::size_t i = 0; i < f.m_motifs.size(); ++i) {
            scale = std::max(scale, std::abs(f.m_motifs[i].pitch));
            for (std::size_t j = i + 1; j < f.m_motifs.size(); ++j)
                scale = std::max(scale, std::abs(f.m_motifs[i].center - f.m_motifs[j].center));
        }
        f.m_scale = scale;
        return f;
    }

    static MotifField tgb(double pitch, double spacing) { return chain(FieldKind::Tgb, pitch, spacing); }
    static MotifField utgb(double pitch, double spacing) { return chain(FieldKind::Utgb, pitch, spacing); }

    /// h == 0. Only meant for degenerate-case tests.
    static MotifField plane_for_testing()
    {
        MotifField f(FieldKind::Finite);
        f.m_scale = 1.0;
        return f;
    }

    FieldKind kind() const { return m_kind; }
    bool is_chain() const { return m_kind != FieldKind::Finite; }
    std::span<const HelicalMotif> motifs() const { return m_motifs; }
    double pitch() const { return m_pitch; }
    double spacing() const { return m_spacing; }
    double length_scale() const { return m_scale; }

    double total_pitch() const
    {
        double s = 0.0;
        for (const auto& m : m_motifs) s += m.pitch;
        return s;
    }

    double max_abs_pitch() const
    {
        if (is_chain()) return std::abs(m_pitch);
        double s = 0.0;
        for (const auto& m : m_motifs) s = std::max(s, std::abs(m.pitch));
        return s;
    }

    double guard_radius() const { return 1e-9 * m_scale; }

    /// Pitch of the motif sitting at chain index n.
    double chain_pitch(long n) const
    {
        if (m_kind == FieldKind::Utgb && (n % 2 != 0)) return -m_pitch;
        return m_pitch;
    }

    double distance_to_sites(Complex z) const
    {
        if (!is_chain()) {
            double d = std::numeric_limits<double>::infinity();
            for (const auto& m : m_motifs) d = std::min(d, std::abs(z - m.center));
            return d;
        }
        const double n = std::round(z.real() / m_spacing);
        return std::abs(z - Complex(n * m_spacing, 0.0));
    }

    /// Sites (with their pitches) inside the closed box.
    std::vector<HelicalMotif> sites_in(double x0, double x1, double y0, double y1) const
    {
        std::vector<HelicalMotif> out;
        if (!is_chain()) {
            for (const auto& m : m_motifs)
                if (m.center.real() >= x0 && m.center.real() <= x1 && m.center.imag() >= y0 && m.center.imag() <= y1)
                    out.push_back(m);
            return out;
        }
        if (y0 > 0.0 || y1 < 0.0) return out;
        const long n0 = static_cast<long>(std::ceil(x0 / m_spacing));
        const long n1 = static_cast<long>(std::floor(x1 / m_spacing));
        for (long n = n0; n <= n1; ++n) out.push_back({Complex(n * m_spacing, 0.0), chain_pitch(n)});
        return out;
    }

private:
    explicit MotifField(FieldKind kind)
        : m_kind(kind)
    {}

    static MotifField chain(FieldKind kind, double pitch, double spacing)
    {
        if (!std::isfinite(pitch) || pitch == 0.0)
            fail(ErrorCode::InvalidArgument, "chain pitch must be finite and nonzero");
        if (!std::isfinite(spacing) || spacing <= 0.0)
            fail(ErrorCode::InvalidArgument, "chain spacing must be strictly positive");
        MotifField f(kind);
        f.m_pitch = pitch;
        f.m_spacing = spacing;
        f.m_scale = std::max(spacing, std::abs(pitch));
        return f;
    }

    FieldKind m_kind;
    std::vector<HelicalMotif> m_motifs;
    double m_pitch = 0.0;
    double m_spacing = 0.0;
    double m_scale = 1.0;
};

/// Height, Wirtinger derivatives and Enneper correction at one point.
struct FieldJet {
    double h = 0.0;
    Complex hz;
    Complex hzz;
    Complex P;
    /// Multiple of 2*pi*pitch folded into h relative to the principal branch.
    double branch_offset = 0.0;
};

namespace detail {

inline Complex hz_unchecked(const MotifField& f, Complex z)
{
    switch (f.kind()) {
    case FieldKind::Finite: {
        Complex s = 0.0;
        for (const auto& m : f.motifs()) s += m.pitch / (z - m.center);
        return s / (2.0 * I);
    }
    case FieldKind::Tgb: {
        const double k = pi / f.spacing();
        return f.pitch() * k / (2.0 * I) * cot_csc(k * z).cot;
    }
    case FieldKind::Utgb: {
        const double k = pi / f.spacing();
        return f.pitch() * k / (2.0 * I) * cot_csc(k * z).csc;
    }
    }
    return 0.0;
}

inline double h_principal(const MotifField& f, Complex z)
{
    switch (f.kind()) {
    case FieldKind::Finite: {
        double h = 0.0;
        for (const auto& m : f.motifs()) h += m.pitch * std::arg(z - m.center);
        return h;
    }
    case FieldKind::Tgb: return f.pitch() * arg_sin(pi * z / f.spacing());
    case FieldKind::Utgb: {
        const Complex u = pi * z / (2.0 * f.spacing());
        return f.pitch() * (arg_sin(u) - arg_cos(u));
    }
    }
    return 0.0;
}

inline FieldJet jet_unchecked(const MotifField& f, Complex z)
{
    FieldJet jet;
    jet.h = h_principal(f, z);
    switch (f.kind()) {
    case FieldKind::Finite: {
        Complex s1 = 0.0, s2 = 0.0, single = 0.0, pair = 0.0;
        const auto motifs = f.motifs();
        for (std::size_t k = 0; k < motifs.size(); ++k) {
            const Complex d = z - motifs[k].center;
            const double p = motifs[k].pitch;
            s1 += p / d;
            s2 += p / (d * d);
            single += p * p / d;
            for (std::size_t j = k + 1; j < motifs.size(); ++j) {
                const Complex dj = z - motifs[j].center;
                pair += motifs[j].pitch * p / (motifs[j].center - motifs[k].center) * std::log(dj / d);
            }
        }
        jet.hz = s1 / (2.0 * I);
        jet.hzz = -s2 / (2.0 * I);
        jet.P = 0.25 * single - 0.5 * pair;
        break;
    }
    case FieldKind::Tgb: {
        const double p = f.pitch();
        const double k = pi / f.spacing();
        const auto [cot, csc] = cot_csc(k * z);
        jet.hz = p * k / (2.0 * I) * cot;
        jet.hzz = -p * k * k / (2.0 * I) * csc * csc;
        jet.P = p * p * k / 4.0 * cot + p * p * k * k / 4.0 * z;
        break;
    }
    case FieldKind::Utgb: {
        const double p = f.pitch();
        const double k = pi / f.spacing();
        const auto [cot, csc] = cot_csc(k * z);
        jet.hz = p * k / (2.0 * I) * csc;
        jet.hzz = -p * k * k / (2.0 * I) * cot * csc;
        jet.P = p * p * k / 4.0 * cot;
        break;
    }
    }
    return jet;
}

inline double point_segment_distance(Complex p, Complex a, Complex b)
{
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

inline double segment_distance_to_sites(const MotifField& f, Complex a, Complex b)
{
    double d = std::numeric_limits<double>::infinity();
    if (!f.is_chain()) {
        for (const auto& m : f.motifs()) d = std::min(d, point_segment_distance(m.center, a, b));
        return d;
    }
    const double l = f.spacing();
    const long n0 = static_cast<long>(std::floor(std::min(a.real(), b.real()) / l)) - 1;
    const long n1 = static_cast<long>(std::ceil(std::max(a.real(), b.real()) / l)) + 1;
    for (long n = n0; n <= n1; ++n) d = std::min(d, point_segment_distance(Complex(n * l, 0.0), a, b));
    return d;
}

/// Distance to the nearest point where P is not holomorphic: motif sites and,
/// for finite sets, the branch cuts of the pair logarithms (segments z_k z_j).
inline double distance_to_P_cuts(const MotifField& f, Complex z)
{
    double d = f.distance_to_sites(z);
    if (!f.is_chain()) {
        const auto m = f.motifs();
        for (std::size_t k = 0; k < m.size(); ++k)
            for (std::size_t j = k + 1; j < m.size(); ++j)
                d = std::min(d, point_segment_distance(z, m[k].center, m[j].center));
    }
    return d;
}

/// Change of h along a short segment, free of 2*pi ambiguities.
inline double h_increment(const MotifField& f, Complex a, Complex b)
{
    switch (f.kind()) {
    case FieldKind::Finite: {
        double dh = 0.0;
        for (const auto& m : f.motifs()) dh += m.pitch * std::arg((b - m.center) / (a - m.center));
        return dh;
    }
    case FieldKind::Tgb:
    case FieldKind::Utgb: {
        const double l = f.spacing();
        const int pieces = std::max(1, static_cast<int>(std::ceil(8.0 * std::abs(b - a) / l)));
        double dh = 0.0;
        Complex prev = a;
        for (int i = 1; i <= pieces; ++i) {
            const Complex next = (i == pieces) ? b : a + (b - a) * (static_cast<double>(i) / pieces);
            if (f.kind() == FieldKind::Tgb) {
                const double k = pi / l;
                dh += f.pitch() * wrap_angle(arg_sin(k * next) - arg_sin(k * prev));
            } else {
                const double k = pi / (2.0 * l);
                dh += f.pitch() * (wrap_angle(arg_sin(k * next) - arg_sin(k * prev))
                                      - wrap_angle(arg_cos(k * next) - arg_cos(k * prev)));
            }
            prev = next;
        }
        return dh;
    }
    }
    return 0.0;
}

/// Change of P along a short segment. The chain forms are single valued; the
/// finite form carries log(d_j / d_k) terms whose imaginary parts are
/// continued with the same wrapped angles as h.
inline Complex P_increment(const MotifField& f, Complex a, Complex b)
{
    if (f.is_chain()) return jet_unchecked(f, b).P - jet_unchecked(f, a).P;
    const auto m = f.motifs();
    Complex single = 0.0, pair = 0.0;
    std::vector<Complex> ratio(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) {
        const Complex da = a - m[k].center, db = b - m[k].center;
        single += m[k].pitch * m[k].pitch * (1.0 / db - 1.0 / da);
        ratio[k] = db / da;
    }
    for (std::size_t k = 0; k < m.size(); ++k)
        for (std::size_t j = k + 1; j < m.size(); ++j) {
            const Complex dlog(std::log(std::abs(ratio[j])) - std::log(std::abs(ratio[k])),
                std::arg(ratio[j]) - std::arg(ratio[k]));
            pair += m[j].pitch * m[k].pitch / (m[j].center - m[k].center) * dlog;
        }
    return 0.25 * single - 0.5 * pair;
}

} // namespace detail

inline void require_regular(const MotifField& f, Complex z)
{
    require_finite(z, "evaluation point");
    if (f.distance_to_sites(z) <= f.guard_radius())
        fail(ErrorCode::SingularPoint, "point lies on a motif site");
}

inline FieldJet eval_jet(const MotifField& f, Complex z)
{
    require_regular(f, z);
    return detail::jet_unchecked(f, z);
}

inline Complex eval_hz(const MotifField& f, Complex z)
{
    require_regular(f, z);
    return detail::hz_unchecked(f, z);
}

/// h along a path, continued without 2*pi*pitch jumps, starting at h_start.
/// Consecutive points must be closer than half the distance to the nearest site.
inline std::vector<double> eval_h_continuous(const MotifField& f, std::span<const Complex> path, double h_start)
{
    std::vector<double> out;
    out.reserve(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        require_regular(f, path[i]);
        if (i == 0) {
            out.push_back(h_start);
            continue;
        }
        const double step = std::abs(path[i] - path[i - 1]);
        if (step >= 0.5 * f.distance_to_sites(path[i - 1]))
            fail(ErrorCode::PathTooCoarse,
                "step " + std::to_string(i) + " is not short compared with the distance to the nearest site");
        out.push_back(out.back() + detail::h_increment(f, path[i - 1], path[i]));
    }
    return out;
}

/// Closed-form P(z) - P(base) by adaptive Gauss-Kronrod quadrature of (dh/dz)^2
/// along a polyline. Independent of the closed forms for P.
inline Complex numeric_P_path(const MotifField& f, std::span<const Complex> path, double tolerance = 1e-12)
{
    using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
    Complex total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const Complex a = path[i];
        const Complex b = path[i + 1];
        require_finite(a, "path point");
        require_finite(b, "path point");
        if (a == b) continue;
        if (detail::segment_distance_to_sites(f, a, b) <= f.guard_radius())
            fail(ErrorCode::PathHitsSingularity, "quadrature path passes through a motif site");
        const Complex dz = b - a;
        auto integrand = [&](double t) {
            const Complex hz = detail::hz_unchecked(f, a + t * dz);
            return hz * hz * dz;
        };
        total += Quadrature::integrate(integrand, 0.0, 1.0, 25, tolerance);
    }
    return total;
}

inline Complex numeric_P(const MotifField& f, Complex z, Complex base, double tolerance = 1e-12)
{
    const Complex path[] = {base, z};
    return numeric_P_path(f, path, tolerance);
}

/// Vertical period T = 2*pi*q, where q is the largest pitch that divides every
/// motif pitch. Throws IncommensuratePitches when no such q exists with a
/// denominator below 64 relative to the smallest |p_j|.
inline double height_period(const MotifField& f)
{
    if (f.is_chain()) return 2.0 * pi * std::abs(f.pitch());
    const auto motifs = f.motifs();
    if (motifs.empty()) fail(ErrorCode::InvalidArgument, "field has no motifs");
    double pmin = std::numeric_limits<double>::infinity();
    for (const auto& m : motifs) pmin = std::min(pmin, std::abs(m.pitch));
    for (int k = 1; k <= 64; ++k) {
        const double q = pmin / k;
        bool ok = true;
        for (const auto& m : motifs) {
            const double r = std::abs(m.pitch) / q;
            if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, r)) {
                ok = false;
                break;
            }
        }
        if (ok) return 2.0 * pi * q;
    }
    fail(ErrorCode::IncommensuratePitches, "motif pitches have no common quantum; the surface is not periodic in height");
}

} // namespace helimin
