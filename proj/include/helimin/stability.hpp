#pragma once

// Stability of finite motif sets under boundary-fixing normal variations.
//   b_k = sum_j p_j z_j^k
//   d_{k+1} = sum_j p_j s_k(z_1, ..., z_{j-1}, z_{j+1}, ..., z_n)
// Stable iff b_0 = ... = b_{n-2} = 0 and b_{n-1} != 0 (equivalently for d).

#include <helimin/detail/parallel.hpp>
#include <helimin/field.hpp>
#include <helimin/immersion.hpp>
#include <helimin/region.hpp>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace helimin {

// ---- generic coefficient algebra ---------------------------------------------

/// e_0..e_n of the values, by expanding prod (1 + z_j t) one factor at a time.
template <class T>
std::vector<T> elementary_symmetric(std::span<const T> z)
{
    std::vector<T> e(z.size() + 1, T(0));
    e[0] = T(1);
    for (std::size_t j = 0; j < z.size(); ++j)
        for (std::size_t k = j + 1; k >= 1; --k) e[k] = e[k] + z[j] * e[k - 1];
    return e;
}

/// b_0 .. b_{count-1}.
template <class T>
std::vector<T> coefficients_b(std::span<const T> z, std::span<const T> p, std::size_t count)
{
    std::vector<T> b(count, T(0));
    for (std::size_t j = 0; j < z.size(); ++j) {
        T power = T(1);
        for (std::size_t k = 0; k < count; ++k) {
            b[k] = b[k] + p[j] * power;
            power = power * z[j];
        }
    }
    return b;
}

/// d_1 .. d_n (index k holds d_{k+1}).
template <class T>
std::vector<T> coefficients_d(std::span<const T> z, std::span<const T> p)
{
    const std::size_t n = z.size();
    std::vector<T> d(n, T(0));
    std::vector<T> others;
    for (std::size_t j = 0; j < n; ++j) {
        others.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (i != j) others.push_back(z[i]);
        const auto s = elementary_symmetric<T>(others);
        for (std::size_t k = 0; k < n; ++k) d[k] = d[k] + p[j] * s[k];
    }
    return d;
}

/// Triangular map d_{k+1} = sum_{i<=k} (-1)^i b_i s_{k-i}(z).
template <class T>
std::vector<T> d_from_b(std::span<const T> b, std::span<const T> z)
{
    const auto s = elementary_symmetric<T>(z);
    const std::size_t n = z.size();
    std::vector<T> d(n, T(0));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i <= k; ++i) {
            const T term = b[i] * s[k - i];
            d[k] = (i % 2 == 0) ? d[k] + term : d[k] - term;
        }
    return d;
}

/// Inverse of d_from_b (the system is unit lower triangular up to signs).
template <class T>
std::vector<T> b_from_d(std::span<const T> d, std::span<const T> z)
{
    const auto s = elementary_symmetric<T>(z);
    const std::size_t n = z.size();
    std::vector<T> b(n, T(0));
    for (std::size_t k = 0; k < n; ++k) {
        T rest = d[k];
        for (std::size_t i = 0; i < k; ++i) {
            const T term = b[i] * s[k - i];
            rest = (i % 2 == 0) ? rest - term : rest + term;
        }
        b[k] = (k % 2 == 0) ? rest : T(0) - rest;
    }
    return b;
}

// ---- floating-point decision -------------------------------------------------

enum class Verdict { Stable, Unstable, Indeterminate };

constexpr const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::Unstable: return "unstable";
    case Verdict::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

struct StabilityReport {
    std::size_t n = 0;
    std::vector<Complex> b; // b_0 .. b_{n-1}
    std::vector<Complex> d; // d_1 .. d_n
    Verdict verdict = Verdict::Indeterminate;
    Verdict b_verdict = Verdict::Indeterminate;
    Verdict d_verdict = Verdict::Indeterminate;
    std::optional<double> spherical_area;
    std::string caveat = "verdict covers normal variations that fix the boundary; "
                         "for boundary-moving variations the criteria are necessary conditions only";
};

struct StabilityTolerance {
    double zero = 1e-12;          // relative band treated as exactly zero
    double ambiguous_factor = 1e3; // values up to factor * band are indeterminate
};

namespace detail {

enum class Sign { Zero, Ambiguous, Nonzero };

inline Sign classify(double magnitude, double band, const StabilityTolerance& tol)
{
    if (magnitude < band) return Sign::Zero;
    if (magnitude < tol.ambiguous_factor * band) return Sign::Ambiguous;
    return Sign::Nonzero;
}

/// Verdict from a coefficient list c_0..c_{n-1}: stable iff the first n-1
/// vanish and the last does not.
inline Verdict prefix_verdict(const std::vector<Sign>& signs)
{
    const std::size_t n = signs.size();
    bool ambiguous = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (signs[k] == Sign::Nonzero) return Verdict::Unstable;
        if (signs[k] == Sign::Ambiguous) ambiguous = true;
    }
    if (ambiguous) return Verdict::Indeterminate;
    if (signs[n - 1] == Sign::Nonzero) return Verdict::Stable;
    if (signs[n - 1] == Sign::Zero) return Verdict::Unstable;
    return Verdict::Indeterminate;
}

inline void require_finite_family(const MotifField& f)
{
    if (f.is_chain())
        fail(ErrorCode::WrongFamily, "stability criteria apply to finite motif sets only");
}

} // namespace detail

inline std::vector<Complex> coefficients_b(const MotifField& f, std::size_t count)
{
    detail::require_finite_family(f);
    std::vector<Complex> z, p;
    for (const auto& m : f.motifs()) {
        z.push_back(m.center);
        p.push_back(m.pitch);
    }
    return coefficients_b<Complex>(z, p, count);
}

inline std::vector<Complex> coefficients_b(const MotifField& f) { return coefficients_b(f, f.motifs().size()); }

inline std::vector<Complex> coefficients_d(const MotifField& f)
{
    detail::require_finite_family(f);
    std::vector<Complex> z, p;
    for (const auto& m : f.motifs()) {
        z.push_back(m.center);
        p.push_back(m.pitch);
    }
    return coefficients_d<Complex>(z, p);
}

inline StabilityReport decide_stability(const MotifField& f, const StabilityTolerance& tol = {})
{
    detail::require_finite_family(f);
    const auto motifs = f.motifs();
    const std::size_t n = motifs.size();
    StabilityReport r;
    r.n = n;
    r.b = coefficients_b(f);
    r.d = coefficients_d(f);

    std::vector<double> absz;
    for (const auto& m : motifs) absz.push_back(std::abs(m.center));
    const auto e_abs = elementary_symmetric<double>(absz);
    double pmax = 0.0;
    for (const auto& m : motifs) pmax = std::max(pmax, std::abs(m.pitch));

    std::vector<detail::Sign> bs, ds;
    for (std::size_t k = 0; k < n; ++k) {
        double scale = 0.0;
        for (const auto& m : motifs)
            scale = std::max(scale, std::abs(m.pitch) * std::pow(std::max(1.0, std::abs(m.center)), static_cast<double>(k)));
        bs.push_back(detail::classify(std::abs(r.b[k]), tol.zero * scale, tol));
        // d_{k+1} is a signed sum of products of k centres: scale by e_k(|z|)
        const double dscale = pmax * std::max(1.0, static_cast<double>(n) * e_abs[k]);
        ds.push_back(detail::classify(std::abs(r.d[k]), tol.zero * dscale, tol));
    }
    r.b_verdict = detail::prefix_verdict(bs);
    r.d_verdict = detail::prefix_verdict(ds);
    r.verdict = (r.b_verdict == r.d_verdict) ? r.b_verdict : Verdict::Indeterminate;
    return r;
}

// ---- exact mode ------------------------------------------------------------

using Rational = boost::multiprecision::cpp_rational;

struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() = default;
    GaussianRational(int v)
        : re(v)
    {}
    GaussianRational(Rational r, Rational i = 0)
        : re(std::move(r))
        , im(std::move(i))
    {}

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b)
    {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b)
    {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) { return a.re == b.re && a.im == b.im; }

    bool is_zero() const { return re == 0 && im == 0; }
    Complex to_complex() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

struct ExactMotif {
    GaussianRational center;
    Rational pitch;
};

/// Parses "3", "-1/4" or "0.125" into an exact rational (decimal digits only).
inline Rational parse_rational(const std::string& text)
{
    using boost::multiprecision::cpp_int;
    auto integer = [&](std::string digits) {
        bool negative = false;
        if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
            negative = digits[0] == '-';
            digits.erase(0, 1);
        }
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            fail(ErrorCode::InvalidArgument, "not a rational number: '" + text + "'");
        // leading zeros would select octal in cpp_int's parser
        const auto first = digits.find_first_not_of('0');
        const cpp_int v(first == std::string::npos ? std::string("0") : digits.substr(first));
        return negative ? cpp_int(-v) : v;
    };
    if (const auto slash = text.find('/'); slash != std::string::npos) {
        const cpp_int den = integer(text.substr(slash + 1));
        if (den == 0) fail(ErrorCode::InvalidArgument, "zero denominator in '" + text + "'");
        return Rational(integer(text.substr(0, slash))) / Rational(den);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(integer(text));
    cpp_int denom = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) denom *= 10;
    return Rational(integer(text.substr(0, dot) + text.substr(dot + 1))) / Rational(denom);
}

inline StabilityReport decide_stability_exact(const std::vector<ExactMotif>& motifs)
{
    if (motifs.empty()) fail(ErrorCode::InvalidArgument, "stability needs at least one motif");
    std::vector<GaussianRational> z, p;
    for (const auto& m : motifs) {
        if (m.pitch == 0) fail(ErrorCode::InvalidArgument, "motif pitch must be nonzero");
        z.push_back(m.center);
        p.push_back(GaussianRational(m.pitch));
    }
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j)
            if (z[i] == z[j]) fail(ErrorCode::DegenerateGeometry, "two motifs share a center");
    const std::size_t n = z.size();
    const auto b = coefficients_b<GaussianRational>(z, p, n);
    const auto d = coefficients_d<GaussianRational>(z, p);
    auto verdict = [n](const std::vector<GaussianRational>& c) {
        for (std::size_t k = 0; k + 1 < n; ++k)
            if (!c[k].is_zero()) return Verdict::Unstable;
        return c[n - 1].is_zero() ? Verdict::Unstable : Verdict::Stable;
    };
    StabilityReport r;
    r.n = n;
    for (const auto& v : b) r.b.push_back(v.to_complex());
    for (const auto& v : d) r.d.push_back(v.to_complex());
    r.b_verdict = verdict(b);
    r.d_verdict = verdict(d);
    r.verdict = (r.b_verdict == r.d_verdict) ? r.b_verdict : Verdict::Indeterminate;
    return r;
}

// ---- spherical image ---------------------------------------------------------

/// Zonal partition of the unit sphere: polar-angle bands of equal height
/// (even count, so the equator is a band edge), each cut into sectors of
/// roughly equal area.
class SpherePartition {
public:
    explicit SpherePartition(std::size_t target_cells)
    {
        if (target_cells < 8) fail(ErrorCode::InvalidArgument, "sphere partition needs at least 8 cells");
        const double side = std::sqrt(4.0 * pi / static_cast<double>(target_cells));
        std::size_t bands = static_cast<std::size_t>(std::ceil(pi / side));
        if (bands % 2 != 0) ++bands;
        m_dtheta = pi / static_cast<double>(bands);
        std::size_t offset = 0;
        for (std::size_t i = 0; i < bands; ++i) {
            const double t0 = i * m_dtheta, t1 = (i + 1) * m_dtheta;
            const double band_area = 2.0 * pi * (std::cos(t0) - std::cos(t1));
            const auto sectors
                = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(band_area / (m_dtheta * m_dtheta))));
            m_bands.push_back({offset, sectors, band_area / static_cast<double>(sectors)});
            offset += sectors;
        }
        m_cells = offset;
    }

    std::size_t size() const { return m_cells; }
    double angular_size() const { return m_dtheta; }

    std::size_t cell(const Vec3& n) const
    {
        const double theta = std::acos(std::clamp(n.z, -1.0, 1.0));
        const auto i = std::min(m_bands.size() - 1, static_cast<std::size_t>(theta / m_dtheta));
        double phi = std::atan2(n.y, n.x);
        if (phi < 0.0) phi += 2.0 * pi;
        const auto& b = m_bands[i];
        const auto j = std::min(b.sectors - 1, static_cast<std::size_t>(phi / (2.0 * pi) * static_cast<double>(b.sectors)));
        return b.offset + j;
    }

    double cell_area(std::size_t c) const
    {
        for (const auto& b : m_bands)
            if (c < b.offset + b.sectors) return b.area;
        return 0.0;
    }

private:
    struct Band {
        std::size_t offset;
        std::size_t sectors;
        double area;
    };
    std::vector<Band> m_bands;
    double m_dtheta = 0.0;
    std::size_t m_cells = 0;
};

struct SphericalAreaOptions {
    std::size_t cells = 20000;   // sphere partition size
    int base_grid = 64;          // base samples per side of the region's box
    int max_refine = 96;         // cap on sub-samples per base square side
    bool omega_N_only = true;    // intersect the region with |g| >= 1
    unsigned threads = 1;
};

/// Area (without multiplicity) of N(region). Sampling density follows
/// |dN/dz| = 2|hzz| / (1 + |hz|^2) so images of neighbouring samples land
/// within half a cell of each other.
inline double spherical_image_area(const MotifField& f, const Region& region, const SphericalAreaOptions& opt = {})
{
    validate(region);
    const SpherePartition sphere(opt.cells);
    const Rectangle box = bounding_box(region);
    const int nb = opt.base_grid;
    const double bx = (box.x1 - box.x0) / nb, by = (box.y1 - box.y0) / nb;
    const double guard = std::max(f.guard_radius(), 1e-12);
    const double target = 0.5 * sphere.angular_size();

    auto speed = [&](Complex z) {
        const auto jet = detail::jet_unchecked(f, z);
        return 2.0 * std::abs(jet.hzz) / (1.0 + std::norm(jet.hz));
    };

    const unsigned workers = std::max(1u, opt.threads);
    std::vector<std::vector<char>> covered(workers, std::vector<char>(sphere.size(), 0));
    detail::parallel_chunks(static_cast<std::size_t>(nb) * nb, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
        auto& mine = covered[w];
        for (std::size_t cell = begin; cell < end; ++cell) {
            const int i = static_cast<int>(cell % nb), j = static_cast<int>(cell / nb);
            const Complex c0(box.x0 + i * bx, box.y0 + j * by);
            double s = 0.0;
            for (int a = 0; a <= 2; ++a)
                for (int b = 0; b <= 2; ++b) {
                    const Complex z = c0 + Complex(0.5 * a * bx, 0.5 * b * by);
                    if (f.distance_to_sites(z) > guard) s = std::max(s, speed(z));
                }
            const int m = std::clamp(static_cast<int>(std::ceil(std::max(bx, by) * s / target)), 1, opt.max_refine);
            for (int a = 0; a <= m; ++a)
                for (int b = 0; b <= m; ++b) {
                    const Complex z = c0 + Complex(bx * a / m, by * b / m);
                    if (!contains(region, z) || f.distance_to_sites(z) <= guard) continue;
                    const Complex hz = detail::hz_unchecked(f, z);
                    if (opt.omega_N_only && !in_omega_N(hz)) continue;
                    mine[sphere.cell(normal_from_hz(hz))] = 1;
                }
        }
    });
    double area = 0.0;
    for (std::size_t c = 0; c < sphere.size(); ++c) {
        bool hit = false;
        for (const auto& v : covered) hit = hit || v[c];
        if (hit) area += sphere.cell_area(c);
    }
    return area;
}

// ---- JSON ------------------------------------------------------------------------

inline nlohmann::json to_json(const StabilityReport& r)
{
    auto list = [](const std::vector<Complex>& v) {
        auto a = nlohmann::json::array();
        for (const auto& c : v) a.push_back({c.real(), c.imag()});
        return a;
    };
    nlohmann::json j;
    j["n"] = r.n;
    j["b"] = list(r.b);
    j["d"] = list(r.d);
    j["verdict"] = to_string(r.verdict);
    j["spherical_area"] = r.spherical_area ? nlohmann::json(*r.spherical_area) : nlohmann::json(nullptr);
    j["caveat"] = r.caveat;
    return j;
}

} // namespace helimin
