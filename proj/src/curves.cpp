#include "rendnet/vgdoc.hpp"

#include <algorithm>
#include <cmath>

#include "rendnet/error.hpp"

namespace rendnet::vgdoc {

const char* to_string(CurveKind k) {
    switch (k) {
        case CurveKind::Line: return "line";
        case CurveKind::Arc: return "arc";
        case CurveKind::QuadBezier: return "quad_bezier";
    }
    return "?";
}

const char* to_string(SurfaceKind k) {
    switch (k) {
        case SurfaceKind::Polygon: return "polygon";
        case SurfaceKind::Disk: return "disk";
        case SurfaceKind::Rect: return "rect";
    }
    return "?";
}

CurveSpec CurveSpec::line(const Vec& a, const Vec& b) {
    CurveSpec c;
    c.kind = CurveKind::Line;
    c.p0 = a;
    c.p1 = b;
    return c;
}

CurveSpec CurveSpec::arc(const Vec& center, double radius, double start, double sweep) {
    CurveSpec c;
    c.kind = CurveKind::Arc;
    c.center = center;
    c.radius = radius;
    c.start = start;
    c.sweep = sweep;
    return c;
}

CurveSpec CurveSpec::arc3d(const Vec& center, double radius, const Vec& ax, const Vec& ay,
                           double start, double sweep) {
    CurveSpec c = arc(center, radius, start, sweep);
    c.ax = ax;
    c.ay = ay;
    return c;
}

CurveSpec CurveSpec::quad_bezier(const Vec& a, const Vec& b, const Vec& c2) {
    CurveSpec c;
    c.kind = CurveKind::QuadBezier;
    c.p0 = a;
    c.p1 = b;
    c.p2 = c2;
    return c;
}

SurfaceSpec SurfaceSpec::polygon(std::vector<Vec> ring) {
    SurfaceSpec s;
    s.kind = SurfaceKind::Polygon;
    s.ring = std::move(ring);
    return s;
}

SurfaceSpec SurfaceSpec::disk(const Vec& center, double radius) {
    SurfaceSpec s;
    s.kind = SurfaceKind::Disk;
    s.center = center;
    s.radius = radius;
    return s;
}

SurfaceSpec SurfaceSpec::disk3d(const Vec& center, double radius, const Vec& ax, const Vec& ay) {
    SurfaceSpec s = disk(center, radius);
    s.ax = ax;
    s.ay = ay;
    return s;
}

SurfaceSpec SurfaceSpec::rect(const Vec& origin, const Vec& u, const Vec& v) {
    SurfaceSpec s;
    s.kind = SurfaceKind::Rect;
    s.origin = origin;
    s.u = u;
    s.v = v;
    return s;
}

static void require_unit_t(double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw DomainError("curve parameter t = " + std::to_string(t) + " outside [0,1]");
}

Vec eval_curve(const CurveSpec& c, double t) {
    require_unit_t(t);
    switch (c.kind) {
        case CurveKind::Line:
            return c.p0 + (c.p1 - c.p0) * t;
        case CurveKind::Arc: {
            double a = c.start + t * c.sweep;
            return c.center + c.radius * (std::cos(a) * c.ax + std::sin(a) * c.ay);
        }
        case CurveKind::QuadBezier: {
            double s = 1.0 - t;
            return c.p0 * (s * s) + c.p1 * (2.0 * s * t) + c.p2 * (t * t);
        }
    }
    return {};
}

// d/dt of eval_curve (not normalized).
static Vec curve_derivative(const CurveSpec& c, double t) {
    switch (c.kind) {
        case CurveKind::Line:
            return c.p1 - c.p0;
        case CurveKind::Arc: {
            double a = c.start + t * c.sweep;
            return c.radius * c.sweep * (-std::sin(a) * c.ax + std::cos(a) * c.ay);
        }
        case CurveKind::QuadBezier:
            return 2.0 * (1.0 - t) * (c.p1 - c.p0) + 2.0 * t * (c.p2 - c.p1);
    }
    return {};
}

Vec curve_tangent(const CurveSpec& c, double t) {
    require_unit_t(t);
    Vec d = curve_derivative(c, t);
    double n = norm(d);
    if (n > 0.0) return d / n;
    // Degenerate quad Bezier endpoint; the chord still points the right way.
    if (c.kind == CurveKind::QuadBezier) return normalized(c.p2 - c.p0);
    return normalized(d);
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
namespace {
constexpr double kGaussX[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr double kGaussW[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

double gauss16_speed(const CurveSpec& c, double a, double b) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 8; ++i) {
        sum += kGaussW[i] * (norm(curve_derivative(c, mid - half * kGaussX[i])) +
                             norm(curve_derivative(c, mid + half * kGaussX[i])));
    }
    return sum * half;
}

double adaptive_length(const CurveSpec& c, double a, double b, double whole, int depth) {
    double m = 0.5 * (a + b);
    double left = gauss16_speed(c, a, m);
    double right = gauss16_speed(c, m, b);
    double refined = left + right;
    if (depth > 24 || std::abs(refined - whole) <= 1e-8 * std::max(1e-300, std::abs(refined)))
        return refined;
    return adaptive_length(c, a, m, left, depth + 1) + adaptive_length(c, m, b, right, depth + 1);
}
} // namespace

double arc_length(const CurveSpec& c, double t0, double t1) {
    if (!(0.0 <= t0 && t0 <= t1 && t1 <= 1.0))
        throw DomainError("arc_length range [" + std::to_string(t0) + "," + std::to_string(t1) +
                          "] invalid");
    switch (c.kind) {
        case CurveKind::Line:
            return norm(c.p1 - c.p0) * (t1 - t0);
        case CurveKind::Arc:
            return c.radius * std::abs(c.sweep) * (t1 - t0);
        case CurveKind::QuadBezier: {
            if (t0 == t1) return 0.0;
            return adaptive_length(c, t0, t1, gauss16_speed(c, t0, t1), 0);
        }
    }
    return 0.0;
}

double arc_length_inverse(const CurveSpec& c, double s) {
    double total = arc_length(c, 0.0, 1.0);
    if (!(s >= -1e-12 * total && s <= total * (1.0 + 1e-12)))
        throw DomainError("arc length s = " + std::to_string(s) + " outside [0, " +
                          std::to_string(total) + "]");
    if (s <= 0.0) return 0.0;
    if (s >= total) return 1.0;
    // Constant-speed kinds invert directly.
    if (c.kind != CurveKind::QuadBezier) return s / total;
    double lo = 0.0, hi = 1.0;
    double tol = 1e-9 * total;
    while (hi - lo > 1e-15) {
        double mid = 0.5 * (lo + hi);
        double l = arc_length(c, 0.0, mid);
        if (std::abs(l - s) <= tol) return mid;
        (l < s ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

BoundingBox curve_bounds(const CurveSpec& c, double t0, double t1) {
    BoundingBox bb;
    bb.expand(eval_curve(c, t0));
    bb.expand(eval_curve(c, t1));
    switch (c.kind) {
        case CurveKind::Line:
            break;
        case CurveKind::QuadBezier: {
            // Interior coordinate extrema: B'_k(t*) = 0.
            for (int k = 0; k < 3; ++k) {
                double denom = c.p0[k] - 2.0 * c.p1[k] + c.p2[k];
                if (denom == 0.0) continue;
                double t = (c.p0[k] - c.p1[k]) / denom;
                if (t > t0 && t < t1) bb.expand(eval_curve(c, t));
            }
            break;
        }
        case CurveKind::Arc: {
            // Coordinate extrema at angles where -sin(a)*ax_k + cos(a)*ay_k = 0.
            double a0 = c.start + t0 * c.sweep;
            double a1 = c.start + t1 * c.sweep;
            double lo = std::min(a0, a1), hi = std::max(a0, a1);
            for (int k = 0; k < 3; ++k) {
                if (c.ax[k] == 0.0 && c.ay[k] == 0.0) continue;
                double base = std::atan2(c.ay[k], c.ax[k]);
                double first = base + std::ceil((lo - base) / 3.14159265358979323846) *
                                          3.14159265358979323846;
                for (double a = first; a <= hi + 1e-15; a += 3.14159265358979323846) {
                    if (a >= lo - 1e-15)
                        bb.expand(c.center + c.radius * (std::cos(a) * c.ax + std::sin(a) * c.ay));
                }
            }
            break;
        }
    }
    return bb;
}

BoundingBox surface_bounds(const SurfaceSpec& s) {
    BoundingBox bb;
    switch (s.kind) {
        case SurfaceKind::Polygon:
            for (const Vec& p : s.ring) bb.expand(p);
            break;
        case SurfaceKind::Disk:
            for (int k = 0; k < 3; ++k) {
                double ext = s.radius * std::hypot(s.ax[k], s.ay[k]);
                Vec lo = s.center, hi = s.center;
                lo[k] -= ext;
                hi[k] += ext;
                bb.expand(lo);
                bb.expand(hi);
            }
            break;
        case SurfaceKind::Rect:
            bb.expand(s.origin);
            bb.expand(s.origin + s.u);
            bb.expand(s.origin + s.v);
            bb.expand(s.origin + s.u + s.v);
            break;
    }
    return bb;
}

BoundingBox document_bounds(const VGDocument& doc) {
    BoundingBox bb;
    for (const auto& c : doc.curves) bb.expand(curve_bounds(c));
    for (const auto& s : doc.surfaces) bb.expand(surface_bounds(s));
    return bb;
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void validate_vec(const Vec& v, int dim, const std::string& path) {
    if (!all_finite(v)) throw ValidationError(path, "non-finite coordinate");
    if (dim == 2 && v.z != 0.0) throw ValidationError(path, "z must be 0 in a 2D document");
}

// Proper segment intersection test for the polygon simplicity check.
bool segments_cross(const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
    auto orient = [](const Vec& p, const Vec& q, const Vec& r) {
        double v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
        if (v > 1e-14) return 1;
        if (v < -1e-14) return -1;
        return 0;
    };
    int o1 = orient(a, b, c), o2 = orient(a, b, d);
    int o3 = orient(c, d, a), o4 = orient(c, d, b);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

// Plane coordinates for a (supposedly) planar ring; throws if not coplanar.
struct PlaneFrame {
    Vec origin, u, v, n;
};

PlaneFrame ring_frame(const std::vector<Vec>& ring, const std::string& path) {
    PlaneFrame f;
    f.origin = ring[0];
    Vec best_n;
    double best = 0.0;
    for (size_t i = 1; i + 1 < ring.size(); ++i) {
        Vec n = cross(ring[i] - ring[0], ring[i + 1] - ring[0]);
        double m = norm2(n);
        if (m > best) {
            best = m;
            best_n = n;
        }
    }
    if (best == 0.0) throw ValidationError(path, "degenerate (collinear) polygon ring");
    f.n = normalized(best_n);
    double span = 0.0;
    for (size_t i = 1; i < ring.size(); ++i) span = std::max(span, norm(ring[i] - ring[0]));
    f.u = {0, 0, 0};
    for (size_t i = 1; i < ring.size(); ++i) {
        Vec d = ring[i] - ring[0];
        d = d - f.n * dot(d, f.n);
        if (norm(d) > 0.5 * span) {
            f.u = normalized(d);
            break;
        }
    }
    if (norm(f.u) == 0.0) f.u = normalized(ring[1] - ring[0] - f.n * dot(ring[1] - ring[0], f.n));
    f.v = cross(f.n, f.u);
    return f;
}

void validate_curve(const CurveSpec& c, int dim, const std::string& path) {
    switch (c.kind) {
        case CurveKind::Line:
            validate_vec(c.p0, dim, path + ".p0");
            validate_vec(c.p1, dim, path + ".p1");
            if (c.p0 == c.p1) throw ValidationError(path, "line start equals end");
            break;
        case CurveKind::QuadBezier:
            validate_vec(c.p0, dim, path + ".p0");
            validate_vec(c.p1, dim, path + ".p1");
            validate_vec(c.p2, dim, path + ".p2");
            if (c.p0 == c.p1 && c.p1 == c.p2)
                throw ValidationError(path, "all control points coincide");
            break;
        case CurveKind::Arc: {
            validate_vec(c.center, dim, path + ".center");
            if (!(c.radius > 0.0)) throw ValidationError(path + ".radius", "arc radius must be > 0");
            double asweep = std::abs(c.sweep);
            if (!(asweep > 0.0 && asweep <= kTwoPi + 1e-12))
                throw ValidationError(path + ".sweep", "|sweep| must be in (0, 2*pi]");
            if (!std::isfinite(c.start)) throw ValidationError(path + ".start", "non-finite angle");
            if (std::abs(norm(c.ax) - 1.0) > 1e-9 || std::abs(norm(c.ay) - 1.0) > 1e-9 ||
                std::abs(dot(c.ax, c.ay)) > 1e-9)
                throw ValidationError(path, "arc axes must be orthonormal");
            if (dim == 2 && (c.ax.z != 0.0 || c.ay.z != 0.0 || c.center.z != 0.0))
                throw ValidationError(path, "3D arc frame in a 2D document");
            break;
        }
    }
}

void validate_surface(const SurfaceSpec& s, int dim, const std::string& path) {
    switch (s.kind) {
        case SurfaceKind::Polygon: {
            if (s.ring.size() < 3) throw ValidationError(path + ".ring", "polygon needs >= 3 vertices");
            for (size_t i = 0; i < s.ring.size(); ++i)
                validate_vec(s.ring[i], dim, path + ".ring[" + std::to_string(i) + "]");
            PlaneFrame f = ring_frame(s.ring, path + ".ring");
            std::vector<Vec> flat(s.ring.size());
            for (size_t i = 0; i < s.ring.size(); ++i) {
                Vec d = s.ring[i] - f.origin;
                if (dim == 3 && std::abs(dot(d, f.n)) > 1e-9)
                    throw ValidationError(path + ".ring", "polygon ring not coplanar");
                flat[i] = {dot(d, f.u), dot(d, f.v), 0.0};
            }
            size_t n = flat.size();
            for (size_t i = 0; i < n; ++i) {
                for (size_t j = i + 1; j < n; ++j) {
                    if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
                    if (segments_cross(flat[i], flat[(i + 1) % n], flat[j], flat[(j + 1) % n]))
                        throw ValidationError(path + ".ring", "self-intersecting polygon ring");
                }
            }
            break;
        }
        case SurfaceKind::Disk:
            validate_vec(s.center, dim, path + ".center");
            if (!(s.radius > 0.0))
                throw ValidationError(path + ".radius", "disk radius must be > 0");
            if (std::abs(norm(s.ax) - 1.0) > 1e-9 || std::abs(norm(s.ay) - 1.0) > 1e-9 ||
                std::abs(dot(s.ax, s.ay)) > 1e-9)
                throw ValidationError(path, "disk axes must be orthonormal");
            break;
        case SurfaceKind::Rect: {
            validate_vec(s.origin, dim, path + ".origin");
            validate_vec(s.u, dim, path + ".u");
            validate_vec(s.v, dim, path + ".v");
            Vec c = cross(s.u, s.v);
            if (norm(c) <= 1e-12 * norm(s.u) * norm(s.v))
                throw ValidationError(path, "rect edge vectors are linearly dependent");
            break;
        }
    }
}

} // namespace

void validate(const VGDocument& doc) {
    if (doc.dim != 2 && doc.dim != 3) throw ValidationError("dim", "dim must be 2 or 3");
    if (doc.curves.empty() && doc.surfaces.empty())
        throw ValidationError("", "document has no curves and no surfaces");
    for (size_t i = 0; i < doc.curves.size(); ++i)
        validate_curve(doc.curves[i], doc.dim, "curves[" + std::to_string(i) + "]");
    for (size_t i = 0; i < doc.surfaces.size(); ++i)
        validate_surface(doc.surfaces[i], doc.dim, "surfaces[" + std::to_string(i) + "]");
}

namespace {

Vec transform_point(const Vec& p, const NormalizeTransform& t) { return t.apply(p); }

CurveSpec transform_curve(CurveSpec c, const NormalizeTransform& t) {
    switch (c.kind) {
        case CurveKind::Line:
            c.p0 = transform_point(c.p0, t);
            c.p1 = transform_point(c.p1, t);
            break;
        case CurveKind::QuadBezier:
            c.p0 = transform_point(c.p0, t);
            c.p1 = transform_point(c.p1, t);
            c.p2 = transform_point(c.p2, t);
            break;
        case CurveKind::Arc:
            c.center = transform_point(c.center, t);
            c.radius *= t.scale;
            break;
    }
    return c;
}

SurfaceSpec transform_surface(SurfaceSpec s, const NormalizeTransform& t) {
    switch (s.kind) {
        case SurfaceKind::Polygon:
            for (Vec& p : s.ring) p = transform_point(p, t);
            break;
        case SurfaceKind::Disk:
            s.center = transform_point(s.center, t);
            s.radius *= t.scale;
            break;
        case SurfaceKind::Rect:
            s.origin = transform_point(s.origin, t);
            s.u *= t.scale;
            s.v *= t.scale;
            break;
    }
    return s;
}

} // namespace

NormalizedDocument normalize_document(const VGDocument& doc) {
    BoundingBox bb = document_bounds(doc);
    double diag = bb.diagonal();
    if (!(diag > 0.0)) throw DomainError("degenerate extent: document bounding box has zero diagonal");
    NormalizeTransform t;
    t.scale = 2.0 / diag;
    t.offset = -(bb.center() * t.scale);
    NormalizedDocument out;
    out.transform = t;
    out.doc.dim = doc.dim;
    out.doc.label = doc.label;
    out.doc.curves.reserve(doc.curves.size());
    for (const auto& c : doc.curves) out.doc.curves.push_back(transform_curve(c, t));
    out.doc.surfaces.reserve(doc.surfaces.size());
    for (const auto& s : doc.surfaces) out.doc.surfaces.push_back(transform_surface(s, t));
    return out;
}

} // namespace rendnet::vgdoc
