#pragma once

// Helical axes: closed components of |g| = 1 lifted onto the surface.

#include <helimin/immersion.hpp>
#include <helimin/level_set.hpp>

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace helimin {

struct AxisCurve {
    std::vector<Complex> planar_points; // closed, first point not repeated
    std::vector<Vec3> immersed_points;
    std::string label;                  // enclosed motif index, "merged", or "" for none
    int enclosed_sites = 0;
    Vec3 period_offset;                 // shift of the lifted curve after one turn
};

namespace detail {

inline bool point_in_polygon(Complex p, const std::vector<Complex>& poly)
{
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Complex a = poly[i], b = poly[j];
        if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
            const double x = a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
            if (p.real() < x) inside = !inside;
        }
    }
    return inside;
}

/// Newton on log|hz| = 0; the gradient of log|hz| is conj(hzz / hz).
inline Complex project_to_unit_level(const MotifField& f, Complex z)
{
    for (int it = 0; it < 8; ++it) {
        const auto jet = jet_unchecked(f, z);
        const double phi = std::log(std::abs(jet.hz));
        const Complex grad = std::conj(jet.hzz / jet.hz);
        if (std::abs(phi) < 1e-15 || std::norm(grad) == 0.0) break;
        z -= phi * grad / std::norm(grad);
    }
    return z;
}

// Closest distance between segments [a0,a1] and [b0,b1] in 3D.
inline double segment_distance(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1)
{
    const Vec3 u = a1 - a0, v = b1 - b0, w = a0 - b0;
    const double a = dot(u, u), b = dot(u, v), c = dot(v, v), d = dot(u, w), e = dot(v, w);
    const double den = a * c - b * b;
    double s = 0.0, t = 0.0;
    if (den > 1e-14 * a * c) s = std::clamp((b * e - c * d) / den, 0.0, 1.0);
    t = c > 0.0 ? std::clamp((b * s + e) / c, 0.0, 1.0) : 0.0;
    s = a > 0.0 ? std::clamp((b * t - d) / a, 0.0, 1.0) : 0.0;
    return norm((a0 + u * s) - (b0 + v * t));
}

} // namespace detail

/// Closed |g| = 1 contours inside the box, each lifted over `periods` turns.
/// Consecutive turns are related by the monodromy of (h, P) around the loop;
/// loops with no net winding in h are stacked by the height period instead.
inline std::vector<AxisCurve> extract_axes(const MotifField& f, int periods, const GridSpec& grid)
{
    if (periods < 1) fail(ErrorCode::InvalidArgument, "periods must be at least 1");
    const auto lines = trace_level_set(f, 1.0, grid);
    const auto sites = f.sites_in(grid.box.x0, grid.box.x1, grid.box.y0, grid.box.y1);
    std::vector<AxisCurve> out;
    for (const auto& line : lines) {
        if (!line.closed || line.points.size() < 3) continue;
        AxisCurve axis;
        for (const auto& z : line.points) axis.planar_points.push_back(detail::project_to_unit_level(f, z));

        int index = -1;
        for (std::size_t k = 0; k < sites.size(); ++k)
            if (detail::point_in_polygon(sites[k].center, axis.planar_points)) {
                ++axis.enclosed_sites;
                index = static_cast<int>(k);
            }
        if (axis.enclosed_sites == 1) {
            if (f.is_chain()) index = static_cast<int>(std::lround(sites[index].center.real() / f.spacing()));
            axis.label = std::to_string(index);
        } else if (axis.enclosed_sites > 1) {
            axis.label = "merged";
        }

        std::vector<Complex> loop = axis.planar_points;
        loop.push_back(loop.front());
        const auto h = eval_h_continuous(f, loop, eval_jet(f, loop.front()).h);
        std::vector<Complex> P(loop.size());
        P[0] = eval_jet(f, loop.front()).P;
        for (std::size_t i = 1; i < loop.size(); ++i) {
            const Complex seg[] = {loop[i - 1], loop[i]};
            P[i] = P[i - 1] + numeric_P_path(f, seg);
        }
        const Complex dP = P.back() - P.front();
        double dh = h.back() - h.front();
        if (std::abs(dh) < 1e-9 * f.length_scale()) dh = height_period(f);
        axis.period_offset = {-std::conj(dP).real(), -std::conj(dP).imag(), dh};

        const std::size_t n = axis.planar_points.size();
        for (int k = 0; k < periods; ++k)
            for (std::size_t i = 0; i < n; ++i) {
                const Complex w = loop[i] - std::conj(P[i]);
                axis.immersed_points.push_back(Vec3{w.real(), w.imag(), h[i]} + axis.period_offset * static_cast<double>(k));
            }
        const Complex w = loop[n] - std::conj(P[n]);
        axis.immersed_points.push_back(Vec3{w.real(), w.imag(), h[n]} + axis.period_offset * static_cast<double>(periods - 1));
        out.push_back(std::move(axis));
    }
    return out;
}

struct AxisMetrics {
    double separation = std::numeric_limits<double>::infinity(); // min distance between distinct axes
    std::vector<double> inclination;                             // radians from vertical, per axis
};

/// Inclination of the least-squares line through the lifted points.
inline double axis_inclination(const AxisCurve& axis)
{
    const auto& pts = axis.immersed_points;
    if (pts.size() < 2) fail(ErrorCode::InvalidArgument, "axis has too few points");
    Eigen::MatrixXd X(pts.size(), 3);
    for (std::size_t i = 0; i < pts.size(); ++i) X.row(static_cast<Eigen::Index>(i)) << pts[i].x, pts[i].y, pts[i].z;
    const Eigen::RowVector3d mean = X.colwise().mean();
    X.rowwise() -= mean;
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(X.transpose() * X);
    const Eigen::Vector3d v = es.eigenvectors().col(2);
    return std::acos(std::min(1.0, std::abs(v.z()) / v.norm()));
}

inline AxisMetrics axis_metrics(const std::vector<AxisCurve>& axes)
{
    AxisMetrics m;
    for (const auto& a : axes) m.inclination.push_back(axis_inclination(a));
    for (std::size_t i = 0; i < axes.size(); ++i)
        for (std::size_t j = i + 1; j < axes.size(); ++j) {
            const auto& A = axes[i].immersed_points;
            const auto& B = axes[j].immersed_points;
            for (std::size_t a = 0; a + 1 < A.size(); ++a)
                for (std::size_t b = 0; b + 1 < B.size(); ++b)
                    m.separation = std::min(m.separation, detail::segment_distance(A[a], A[a + 1], B[b], B[b + 1]));
        }
    return m;
}

} // namespace helimin
