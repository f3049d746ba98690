#pragma once

#include <helimin/types.hpp>

#include <cmath>
#include <complex>

// Complex trigonometry that stays finite far from the real axis, where
// std::sin/std::cos overflow long before cot/csc/arg(sin) lose meaning.
namespace helimin::detail {

inline constexpr double kTrigSwitch = 20.0;

struct CotCsc {
    Complex cot;
    Complex csc;
};

inline CotCsc cot_csc(Complex w)
{
    if (std::abs(w.imag()) < kTrigSwitch) {
        const Complex s = std::sin(w);
        return {std::cos(w) / s, 1.0 / s};
    }
    if (w.imag() > 0.0) {
        const Complex e = std::exp(I * w);
        const Complex q = e * e;
        return {I * (q + 1.0) / (q - 1.0), 2.0 * I * e / (q - 1.0)};
    }
    const Complex e = std::exp(-I * w);
    const Complex q = e * e;
    return {I * (1.0 + q) / (1.0 - q), 2.0 * I * e / (1.0 - q)};
}

inline double wrap_angle(double a)
{
    a = std::remainder(a, 2.0 * pi);
    if (a <= -pi) a += 2.0 * pi;
    return a;
}

/// Principal argument of sin(w).
inline double arg_sin(Complex w)
{
    if (std::abs(w.imag()) < kTrigSwitch) return std::arg(std::sin(w));
    if (w.imag() > 0.0) {
        // sin w = e^{-iw} (e^{2iw} - 1) / (2i)
        const Complex q = std::exp(2.0 * I * w);
        return wrap_angle(-w.real() + std::arg((q - 1.0) / (2.0 * I)));
    }
    // sin w = e^{iw} (1 - e^{-2iw}) / (2i)
    const Complex q = std::exp(-2.0 * I * w);
    return wrap_angle(w.real() + std::arg((1.0 - q) / (2.0 * I)));
}

inline double arg_cos(Complex w) { return arg_sin(w + pi / 2.0); }

} // namespace helimin::detail
