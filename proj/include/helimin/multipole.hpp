#pragma once

// Far field of a finite motif set:
//   h = p arg z + sum_k Im(c_k z^-k),  p = sum_j p_j,  c_k = -(1/k) sum_j p_j z_j^k

#include <helimin/field.hpp>

#include <Eigen/Dense>

#include <vector>

namespace helimin {

struct MultipoleExpansion {
    double total_pitch = 0.0;
    std::vector<Complex> coefficients; // c_1 .. c_kmax
    double convergence_radius = 0.0;   // max_j |z_j|

    /// h - p arg z from the truncated series.
    double residual_height(Complex z) const
    {
        Complex s = 0.0;
        const Complex w = 1.0 / z;
        Complex wk = w;
        for (const auto& c : coefficients) {
            s += c * wk;
            wk *= w;
        }
        return s.imag();
    }
};

inline MultipoleExpansion multipole(const MotifField& f, int kmax)
{
    if (f.is_chain())
        fail(ErrorCode::WrongFamily, "an infinite chain of motifs has no multipole expansion");
    if (kmax < 1) fail(ErrorCode::InvalidArgument, "kmax must be at least 1");
    MultipoleExpansion m;
    m.coefficients.assign(static_cast<std::size_t>(kmax), 0.0);
    for (const auto& q : f.motifs()) {
        m.total_pitch += q.pitch;
        m.convergence_radius = std::max(m.convergence_radius, std::abs(q.center));
        Complex power = q.center;
        for (int k = 1; k <= kmax; ++k) {
            m.coefficients[k - 1] -= q.pitch * power / static_cast<double>(k);
            power *= q.center;
        }
    }
    return m;
}

/// h - p arg z evaluated motif by motif: each p_j (arg(z - z_j) - arg z) is
/// wrapped into (-pi, pi], which is the right branch outside all |z_j|.
inline double direct_residual_height(const MotifField& f, Complex z)
{
    double s = 0.0;
    for (const auto& q : f.motifs()) s += q.pitch * detail::wrap_angle(std::arg(z - q.center) - std::arg(z));
    return s;
}

/// Least-squares fit of h(theta) = a + P theta + sum_{k<=harmonics} (b_k cos k theta + c_k sin k theta)
/// to the continuously lifted height on a circle; returns P.
inline double fit_far_pitch(const MotifField& f, Complex center, double radius, int samples = 512, int harmonics = 8)
{
    std::vector<Complex> path;
    for (int i = 0; i <= samples; ++i) path.push_back(center + std::polar(radius, 2.0 * pi * i / samples));
    const auto h = eval_h_continuous(f, path, eval_jet(f, path[0]).h);
    const int cols = 2 + 2 * harmonics;
    Eigen::MatrixXd A(samples + 1, cols);
    Eigen::VectorXd y(samples + 1);
    for (int i = 0; i <= samples; ++i) {
        const double t = 2.0 * pi * i / samples;
        A(i, 0) = 1.0;
        A(i, 1) = t;
        for (int k = 1; k <= harmonics; ++k) {
            A(i, 2 * k) = std::cos(k * t);
            A(i, 2 * k + 1) = std::sin(k * t);
        }
        y(i) = h[i];
    }
    const Eigen::VectorXd x = A.colPivHouseholderQr().solve(y);
    return x(1);
}

struct FarFieldReport {
    double radius = 0.0;
    int kmax = 0;
    double max_abs_error = 0.0; // sup over the circle of |direct - series|
    double max_rel_error = 0.0; // same over max |direct|
    double fitted_pitch = 0.0;
    double total_pitch = 0.0;
};

inline FarFieldReport far_field_check(const MotifField& f, double radius, int kmax, int samples = 720)
{
    const auto m = multipole(f, kmax);
    if (!(radius > m.convergence_radius))
        fail(ErrorCode::InvalidArgument, "far-field circle must enclose every motif");
    FarFieldReport r;
    r.radius = radius;
    r.kmax = kmax;
    r.total_pitch = m.total_pitch;
    double scale = 0.0;
    for (int i = 0; i < samples; ++i) {
        const Complex z = std::polar(radius, 2.0 * pi * i / samples);
        const double direct = direct_residual_height(f, z);
        r.max_abs_error = std::max(r.max_abs_error, std::abs(direct - m.residual_height(z)));
        scale = std::max(scale, std::abs(direct));
    }
    r.max_rel_error = scale > 0.0 ? r.max_abs_error / scale : r.max_abs_error;
    r.fitted_pitch = fit_far_pitch(f, 0.0, radius);
    return r;
}

} // namespace helimin
