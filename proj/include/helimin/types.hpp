#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace helimin {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr Complex I{0.0, 1.0};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
    friend constexpr Vec3 operator*(const Vec3& a, double s) { return s * a; }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
    Vec3& operator+=(const Vec3& o)
    {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

enum class ErrorCode {
    InvalidArgument,
    SingularPoint,
    DegenerateGeometry,
    PathTooCoarse,
    PathHitsSingularity,
    NotMinimal,
    SingularGradient,
    WrongFamily,
    GridTooCoarse,
    IncommensuratePitches,
    Io,
};

constexpr const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::PathTooCoarse: return "PathTooCoarse";
    case ErrorCode::PathHitsSingularity: return "PathHitsSingularity";
    case ErrorCode::NotMinimal: return "NotMinimal";
    case ErrorCode::SingularGradient: return "SingularGradient";
    case ErrorCode::WrongFamily: return "WrongFamily";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::IncommensuratePitches: return "IncommensuratePitches";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Every failure surfaced by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message)
        , m_code(code)
    {}

    ErrorCode code() const noexcept { return m_code; }

private:
    ErrorCode m_code;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline void require_finite(Complex z, const char* what)
{
    if (!is_finite(z)) fail(ErrorCode::InvalidArgument, std::string(what) + " must be finite");
}

} // namespace helimin
