#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace rendnet {

// Cartesian point/vector. Documents with dim == 2 keep z == 0 so the same
// arithmetic serves both dimensions.
struct Vec {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec() = default;
    constexpr Vec(double x_, double y_, double z_ = 0.0) : x(x_), y(y_), z(z_) {}

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    Vec operator+(const Vec& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec operator-(const Vec& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec operator-() const { return {-x, -y, -z}; }
    Vec& operator+=(const Vec& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec& operator-=(const Vec& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    bool operator==(const Vec& o) const { return x == o.x && y == o.y && z == o.z; }
};

inline Vec operator*(double s, const Vec& v) { return v * s; }
inline double dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec cross(const Vec& a, const Vec& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec& v) { return dot(v, v); }
inline double norm(const Vec& v) { return std::sqrt(norm2(v)); }
inline double distance(const Vec& a, const Vec& b) { return norm(a - b); }
inline Vec normalized(const Vec& v) {
    double n = norm(v);
    return n > 0.0 ? v / n : Vec{};
}
inline bool all_finite(const Vec& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

struct BoundingBox {
    Vec lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity()};
    Vec hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};

    bool empty() const { return lo.x > hi.x; }
    void expand(const Vec& p) {
        lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
        hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
    }
    void expand(const BoundingBox& b) {
        if (b.empty()) return;
        expand(b.lo); expand(b.hi);
    }
    Vec center() const { return (lo + hi) * 0.5; }
    double diagonal() const { return empty() ? 0.0 : distance(lo, hi); }
    bool overlaps(const BoundingBox& o, double pad) const {
        return lo.x - pad <= o.hi.x && o.lo.x - pad <= hi.x &&
               lo.y - pad <= o.hi.y && o.lo.y - pad <= hi.y &&
               lo.z - pad <= o.hi.z && o.lo.z - pad <= hi.z;
    }
};

} // namespace rendnet
