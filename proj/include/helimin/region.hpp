#pragma once

#include <helimin/types.hpp>

#include <variant>

namespace helimin {

struct Disc {
    Complex center;
    double radius = 1.0;
};

struct Annulus {
    Complex center;
    double r_inner = 0.0;
    double r_outer = 1.0;
};

struct Rectangle {
    double x0 = 0.0, x1 = 1.0;
    double y0 = 0.0, y1 = 1.0;
};

using Region = std::variant<Disc, Annulus, Rectangle>;

inline bool contains(const Region& region, Complex z)
{
    return std::visit(
        [&](const auto& r) -> bool {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, Disc>) {
                return std::abs(z - r.center) <= r.radius;
            } else if constexpr (std::is_same_v<R, Annulus>) {
                const double d = std::abs(z - r.center);
                return d >= r.r_inner && d <= r.r_outer;
            } else {
                return z.real() >= r.x0 && z.real() <= r.x1 && z.imag() >= r.y0 && z.imag() <= r.y1;
            }
        },
        region);
}

inline Rectangle bounding_box(const Region& region)
{
    return std::visit(
        [](const auto& r) -> Rectangle {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, Disc>) {
                return {r.center.real() - r.radius, r.center.real() + r.radius, r.center.imag() - r.radius,
                    r.center.imag() + r.radius};
            } else if constexpr (std::is_same_v<R, Annulus>) {
                return {r.center.real() - r.r_outer, r.center.real() + r.r_outer, r.center.imag() - r.r_outer,
                    r.center.imag() + r.r_outer};
            } else {
                return r;
            }
        },
        region);
}

inline void validate(const Region& region)
{
    std::visit(
        [](const auto& r) {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, Disc>) {
                if (!(r.radius > 0.0)) fail(ErrorCode::InvalidArgument, "disc radius must be positive");
            } else if constexpr (std::is_same_v<R, Annulus>) {
                if (!(r.r_inner >= 0.0 && r.r_outer > r.r_inner))
                    fail(ErrorCode::InvalidArgument, "annulus radii must satisfy 0 <= r_inner < r_outer");
            } else {
                if (!(r.x1 > r.x0 && r.y1 > r.y0)) fail(ErrorCode::InvalidArgument, "rectangle must have positive extent");
            }
        },
        region);
}

} // namespace helimin
