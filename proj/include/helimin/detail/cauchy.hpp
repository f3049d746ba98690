#pragma once

#include <helimin/types.hpp>

// n-th derivative of a holomorphic function from samples on a circle
// (trapezoidal rule for the Cauchy integral; converges geometrically when
// the circle stays well inside the disc of analyticity).
namespace helimin::detail {

template <class F>
Complex cauchy_derivative(F&& f, Complex z, double radius, int order = 1, int samples = 48)
{
    Complex sum = 0.0;
    for (int k = 0; k < samples; ++k) {
        const Complex w = std::polar(1.0, 2.0 * pi * k / samples);
        sum += f(z + radius * w) * std::pow(w, -order);
    }
    double factorial = 1.0;
    for (int j = 2; j <= order; ++j) factorial *= j;
    return factorial * sum / (static_cast<double>(samples) * std::pow(radius, order));
}

} // namespace helimin::detail
