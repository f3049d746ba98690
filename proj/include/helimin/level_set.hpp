#pragma once

// Level sets of |g| on the parameter plane: marching-squares contours,
// connected components of {|g| < c}, and topological transitions in p.

#include <helimin/field.hpp>
#include <helimin/region.hpp>

#include <cstdint>
#include <map>
#include <ostream>
#include <optional>
#include <vector>

namespace helimin {

struct Polyline {
    std::vector<Complex> points; // closed polylines do not repeat the first point
    bool closed = false;
};

struct GridSpec {
    Rectangle box;
    double step = 0.01;
};

namespace detail {

/// log|g| - log c with the poles and zeros of hz clamped to finite values.
inline double level_function(const MotifField& f, Complex z, double log_c)
{
    const Complex hz = hz_unchecked(f, z);
    const double a = std::abs(hz);
    if (!(a < 1e200)) return -200.0 - log_c;
    if (a < 1e-200) return 200.0 - log_c;
    return -std::log(a) - log_c;
}

struct ScalarGrid {
    int nx = 0, ny = 0; // vertex counts
    double x0 = 0, y0 = 0, dx = 0, dy = 0;
    std::vector<double> v;

    double at(int i, int j) const { return v[static_cast<std::size_t>(j) * nx + i]; }
    Complex point(int i, int j) const { return {x0 + i * dx, y0 + j * dy}; }
};

inline ScalarGrid sample_grid(const MotifField& f, const GridSpec& g, double log_c)
{
    validate(Region{g.box});
    if (!(g.step > 0.0)) fail(ErrorCode::InvalidArgument, "grid step must be positive");
    ScalarGrid s;
    s.nx = static_cast<int>(std::ceil((g.box.x1 - g.box.x0) / g.step)) + 1;
    s.ny = static_cast<int>(std::ceil((g.box.y1 - g.box.y0) / g.step)) + 1;
    s.x0 = g.box.x0;
    s.y0 = g.box.y0;
    s.dx = (g.box.x1 - g.box.x0) / (s.nx - 1);
    s.dy = (g.box.y1 - g.box.y0) / (s.ny - 1);
    s.v.resize(static_cast<std::size_t>(s.nx) * s.ny);
    for (int j = 0; j < s.ny; ++j)
        for (int i = 0; i < s.nx; ++i) s.v[static_cast<std::size_t>(j) * s.nx + i] = level_function(f, s.point(i, j), log_c);
    return s;
}

} // namespace detail

/// Contours of |g| = c by marching squares with linear interpolation along
/// cell edges. Vertices with |g| <= c count as inside, so a vertex sitting
/// exactly on a crossing (the lemniscate node) joins the two lobes into one
/// figure-eight. Saddle cells are resolved by the value at the cell centre.
inline std::vector<Polyline> trace_level_set(const MotifField& f, double c, const GridSpec& grid)
{
    if (!(c > 0.0) || !std::isfinite(c)) fail(ErrorCode::InvalidArgument, "level must be positive and finite");
    const double pmin = f.is_chain() ? std::abs(f.pitch()) : [&] {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& q : f.motifs()) m = std::min(m, std::abs(q.pitch));
        return m;
    }();
    if (grid.step > pmin / 20.0)
        fail(ErrorCode::GridTooCoarse, "grid step must not exceed min|p|/20 to resolve the level curves");
    const double log_c = std::log(c);
    const auto s = detail::sample_grid(f, grid, log_c);

    // Crossing points keyed by edge id: horizontal edge (i,j)-(i+1,j) -> 2*(j*nx+i),
    // vertical edge (i,j)-(i,j+1) -> 2*(j*nx+i)+1.
    auto hkey = [&](int i, int j) { return 2 * (static_cast<std::int64_t>(j) * s.nx + i); };
    auto vkey = [&](int i, int j) { return 2 * (static_cast<std::int64_t>(j) * s.nx + i) + 1; };
    std::map<std::int64_t, Complex> points;
    auto crossing = [&](std::int64_t key, Complex a, Complex b, double va, double vb) {
        auto it = points.find(key);
        if (it != points.end()) return;
        const double t = va / (va - vb);
        points.emplace(key, a + t * (b - a));
    };
    std::map<std::int64_t, std::vector<std::int64_t>> adj;
    auto link = [&](std::int64_t a, std::int64_t b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    };

    for (int j = 0; j + 1 < s.ny; ++j)
        for (int i = 0; i + 1 < s.nx; ++i) {
            const double v00 = s.at(i, j), v10 = s.at(i + 1, j), v11 = s.at(i + 1, j + 1), v01 = s.at(i, j + 1);
            const bool b00 = v00 > 0, b10 = v10 > 0, b11 = v11 > 0, b01 = v01 > 0;
            const int index = b00 | (b10 << 1) | (b11 << 2) | (b01 << 3);
            if (index == 0 || index == 15) continue;
            const Complex p00 = s.point(i, j), p10 = s.point(i + 1, j), p11 = s.point(i + 1, j + 1),
                          p01 = s.point(i, j + 1);
            const std::int64_t bottom = hkey(i, j), top = hkey(i, j + 1), left = vkey(i, j), right = vkey(i + 1, j);
            if (b00 != b10) crossing(bottom, p00, p10, v00, v10);
            if (b01 != b11) crossing(top, p01, p11, v01, v11);
            if (b00 != b01) crossing(left, p00, p01, v00, v01);
            if (b10 != b11) crossing(right, p10, p11, v10, v11);
            switch (index) {
            case 1: case 14: link(bottom, left); break;
            case 2: case 13: link(bottom, right); break;
            case 3: case 12: link(left, right); break;
            case 4: case 11: link(right, top); break;
            case 6: case 9: link(bottom, top); break;
            case 7: case 8: link(left, top); break;
            case 5: case 10: {
                const double centre = detail::level_function(f, 0.5 * (p00 + p11), log_c);
                if ((centre > 0) == (index == 5)) {
                    // centre joins the corners (0,0) and (1,1): cut off the other two
                    link(bottom, right);
                    link(top, left);
                } else {
                    link(bottom, left);
                    link(top, right);
                }
                break;
            }
            default: break;
            }
        }

    // Stitch: open chains start at degree-1 points (box boundary), then loops.
    std::vector<Polyline> out;
    std::map<std::pair<std::int64_t, std::int64_t>, int> remaining;
    for (const auto& [a, nbrs] : adj)
        for (auto b : nbrs) remaining[{a, b}]++;
    auto take = [&](std::int64_t a, std::int64_t b) {
        if (--remaining[{a, b}] == 0) remaining.erase({a, b});
        if (--remaining[{b, a}] == 0) remaining.erase({b, a});
    };
    auto next_of = [&](std::int64_t a) -> std::optional<std::int64_t> {
        for (auto b : adj[a])
            if (remaining.count({a, b})) return b;
        return std::nullopt;
    };
    auto walk = [&](std::int64_t start) {
        Polyline line;
        line.points.push_back(points.at(start));
        std::int64_t cur = start;
        while (auto nxt = next_of(cur)) {
            take(cur, *nxt);
            cur = *nxt;
            if (cur == start) {
                line.closed = true;
                break;
            }
            line.points.push_back(points.at(cur));
        }
        return line;
    };
    for (const auto& [a, nbrs] : adj)
        if (nbrs.size() == 1 && next_of(a)) out.push_back(walk(a));
    for (const auto& [a, nbrs] : adj)
        while (next_of(a)) out.push_back(walk(a));

    for (const auto& line : out) {
        if (line.closed) continue;
        const auto on_boundary = [&](Complex z) {
            const double tol = 1e-9 * std::max(s.dx, s.dy);
            return std::abs(z.real() - grid.box.x0) < tol || std::abs(z.real() - grid.box.x1) < tol
                || std::abs(z.imag() - grid.box.y0) < tol || std::abs(z.imag() - grid.box.y1) < tol;
        };
        if (!on_boundary(line.points.front()) || !on_boundary(line.points.back()))
            fail(ErrorCode::GridTooCoarse, "a level curve failed to close inside the box");
    }
    return out;
}

/// CSV with an "x,y" header; components separated by a blank line. Closed
/// components repeat their first point at the end.
inline void write_polylines_csv(std::ostream& os, const std::vector<Polyline>& lines)
{
    os << "x,y\n";
    char buf[64];
    for (std::size_t k = 0; k < lines.size(); ++k) {
        if (k > 0) os << '\n';
        const auto& pts = lines[k].points;
        for (std::size_t i = 0; i <= pts.size(); ++i) {
            if (i == pts.size() && !(lines[k].closed && !pts.empty())) break;
            const Complex z = pts[i % pts.size()];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", z.real(), z.imag());
            os << buf;
        }
    }
}

/// Number of 4-connected components of the grid vertices with |g| <= c.
inline int count_sublevel_components(const MotifField& f, double c, const GridSpec& grid)
{
    const auto s = detail::sample_grid(f, grid, std::log(c));
    std::vector<int> label(s.v.size(), -1);
    int count = 0;
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < s.v.size(); ++start) {
        if (label[start] >= 0 || s.v[start] > 0.0) continue;
        label[start] = count;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t k = stack.back();
            stack.pop_back();
            const int i = static_cast<int>(k % s.nx), j = static_cast<int>(k / s.nx);
            const int di[] = {1, -1, 0, 0}, dj[] = {0, 0, 1, -1};
            for (int q = 0; q < 4; ++q) {
                const int a = i + di[q], b = j + dj[q];
                if (a < 0 || b < 0 || a >= s.nx || b >= s.ny) continue;
                const std::size_t n = static_cast<std::size_t>(b) * s.nx + a;
                if (label[n] < 0 && !(s.v[n] > 0.0)) {
                    label[n] = count;
                    stack.push_back(n);
                }
            }
        }
        ++count;
    }
    return count;
}

enum class PairFamily { SameHanded, Dipole, Tgb, Utgb };

constexpr const char* to_string(PairFamily f)
{
    switch (f) {
    case PairFamily::SameHanded: return "same-handed";
    case PairFamily::Dipole: return "dipole";
    case PairFamily::Tgb: return "tgb";
    case PairFamily::Utgb: return "utgb";
    }
    return "unknown";
}

/// Field of the family at pitch p and length L (separation R or spacing l).
inline MotifField family_field(PairFamily fam, double p, double L)
{
    switch (fam) {
    case PairFamily::SameHanded: return MotifField::finite({{Complex(L / 2, 0), p}, {Complex(-L / 2, 0), p}});
    case PairFamily::Dipole: return MotifField::finite({{Complex(L / 2, 0), p}, {Complex(-L / 2, 0), -p}});
    case PairFamily::Tgb: return MotifField::tgb(p, L);
    case PairFamily::Utgb: return MotifField::utgb(p, L);
    }
    fail(ErrorCode::InvalidArgument, "unknown family");
}

/// Box that holds the two cores and the neck where they merge.
inline Rectangle family_box(PairFamily fam, double L)
{
    switch (fam) {
    case PairFamily::SameHanded:
    case PairFamily::Dipole: return {-2.5 * L, 2.5 * L, -2.5 * L, 2.5 * L};
    case PairFamily::Tgb: return {-0.5 * L, 1.5 * L, -4.0 * L, 4.0 * L};
    case PairFamily::Utgb: return {-0.5 * L, 1.5 * L, -1.0 * L, 1.0 * L};
    }
    return {};
}

struct TransitionReport {
    PairFamily family = PairFamily::Dipole;
    double length = 1.0;            // R or l
    double critical_estimate = 0.0; // p_c
    double ratio = 0.0;             // p_c / length
    int count_below = 0;
    int count_above = 0;
    int component_count = 0; // at the upper end of the search bracket
    double bracket_width = 0.0;
};

struct TransitionOptions {
    int grid = 1024;      // vertices per side of the larger box dimension
    double p_lo = 0.05;   // in units of the length
    double p_hi = 1.5;
    double tolerance = 1e-4; // bracket width, in units of the length
};

/// Bisection on the number of components of {|g| < 1}; the count drops from
/// two separate cores to one merged region at p_c.
inline TransitionReport detect_transition(PairFamily fam, double length, const TransitionOptions& opt = {})
{
    if (!(length > 0.0)) fail(ErrorCode::InvalidArgument, "length must be positive");
    const Rectangle box = family_box(fam, length);
    const double step = std::max(box.x1 - box.x0, box.y1 - box.y0) / (opt.grid - 1);
    const GridSpec grid{box, step};
    auto count = [&](double p) { return count_sublevel_components(family_field(fam, p * length, length), 1.0, grid); };
    double lo = opt.p_lo, hi = opt.p_hi;
    const int c_lo = count(lo), c_hi = count(hi);
    if (c_lo == c_hi)
        fail(ErrorCode::DegenerateGeometry, "no change in component count across the pitch bracket");
    while (hi - lo > opt.tolerance) {
        const double mid = 0.5 * (lo + hi);
        (count(mid) == c_lo ? lo : hi) = mid;
    }
    TransitionReport r;
    r.family = fam;
    r.length = length;
    r.critical_estimate = 0.5 * (lo + hi) * length;
    r.ratio = 0.5 * (lo + hi);
    r.count_below = c_lo;
    r.count_above = c_hi;
    r.component_count = c_hi;
    r.bracket_width = (hi - lo) * length;
    return r;
}

} // namespace helimin
