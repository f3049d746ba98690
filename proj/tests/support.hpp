#pragma once

#include <helimin/field.hpp>

#include <cmath>
#include <random>
#include <vector>

namespace testing_support {

using helimin::Complex;
using helimin::MotifField;

inline std::mt19937_64& rng()
{
    static std::mt19937_64 engine(20240611);
    return engine;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

inline Complex uniform_point(double half) { return {uniform(-half, half), uniform(-half, half)}; }

// Uniform point in the box that keeps a minimum distance from every site.
inline Complex regular_point(const MotifField& f, double half, double margin)
{
    for (;;) {
        const Complex z = uniform_point(half);
        if (f.distance_to_sites(z) > margin) return z;
    }
}

inline MotifField helicoid(double p0, Complex z0 = 0.0) { return MotifField::finite({{z0, p0}}); }

inline MotifField same_pair(double p, double R) { return MotifField::finite({{Complex(R / 2, 0), p}, {Complex(-R / 2, 0), p}}); }

// p at +R/2 and -p at -R/2
inline MotifField dipole(double p, double R)
{
    return MotifField::finite({{Complex(R / 2, 0), p}, {Complex(-R / 2, 0), -p}});
}

inline MotifField chain10(double p, double spacing)
{
    std::vector<helimin::HelicalMotif> m;
    for (int k = 0; k < 10; ++k) m.push_back({Complex((k - 4.5) * spacing, 0.0), p});
    return MotifField::finite(std::move(m));
}

inline MotifField random_finite(int n, double half = 2.0)
{
    for (;;) {
        std::vector<helimin::HelicalMotif> m;
        for (int k = 0; k < n; ++k) {
            double p = uniform(0.1, 1.0);
            if (uniform(0, 1) < 0.5) p = -p;
            m.push_back({uniform_point(half), p});
        }
        bool ok = true;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (std::abs(m[i].center - m[j].center) < 0.1) ok = false;
        if (ok) return MotifField::finite(std::move(m));
    }
}

inline std::vector<Complex> circle(Complex c, double r, int n, bool close = true)
{
    std::vector<Complex> pts;
    for (int k = 0; k < n + (close ? 1 : 0); ++k) pts.push_back(c + std::polar(r, 2.0 * helimin::pi * k / n));
    return pts;
}

} // namespace testing_support
