#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rendnet/geometry.hpp"

namespace rendnet::vgdoc {

enum class CurveKind { Line, Arc, QuadBezier };
enum class SurfaceKind { Polygon, Disk, Rect };

constexpr int kCurveKindCount = 3;
constexpr int kSurfaceKindCount = 3;

const char* to_string(CurveKind k);
const char* to_string(SurfaceKind k);

// One parametric curve segment, t in [0,1].
//   Line:       p0 -> p1.
//   Arc:        center + radius*(cos(a)*ax + sin(a)*ay), a = start + t*sweep.
//               In 2D ax = (1,0), ay = (0,1).
//   QuadBezier: control points p0, p1, p2.
struct CurveSpec {
    CurveKind kind = CurveKind::Line;
    Vec p0, p1, p2;          // Line: p0,p1. QuadBezier: p0,p1,p2.
    Vec center;              // Arc
    double radius = 0.0;     // Arc
    double start = 0.0;      // Arc start angle (radians)
    double sweep = 0.0;      // Arc signed sweep, |sweep| in (0, 2*pi]
    Vec ax{1, 0, 0}, ay{0, 1, 0}; // Arc in-plane axes (orthonormal)

    static CurveSpec line(const Vec& a, const Vec& b);
    static CurveSpec arc(const Vec& center, double radius, double start, double sweep);
    static CurveSpec arc3d(const Vec& center, double radius, const Vec& ax, const Vec& ay,
                           double start, double sweep);
    static CurveSpec quad_bezier(const Vec& a, const Vec& b, const Vec& c);
};

struct SurfaceSpec {
    SurfaceKind kind = SurfaceKind::Polygon;
    std::vector<Vec> ring;   // Polygon: ordered simple vertex ring
    Vec center;              // Disk
    double radius = 0.0;     // Disk
    Vec ax{1, 0, 0}, ay{0, 1, 0}; // Disk plane axes
    Vec origin, u, v;        // Rect: corner + two edge vectors

    static SurfaceSpec polygon(std::vector<Vec> ring);
    static SurfaceSpec disk(const Vec& center, double radius);
    static SurfaceSpec disk3d(const Vec& center, double radius, const Vec& ax, const Vec& ay);
    static SurfaceSpec rect(const Vec& origin, const Vec& u, const Vec& v);
};

struct VGDocument {
    int dim = 2; // 2 or 3
    std::vector<CurveSpec> curves;
    std::vector<SurfaceSpec> surfaces;
    std::optional<int> label;
};

// Uniform scale + translation applied by normalize_document: p' = scale * p + offset.
struct NormalizeTransform {
    double scale = 1.0;
    Vec offset;
    Vec apply(const Vec& p) const { return p * scale + offset; }
    Vec invert(const Vec& p) const { return (p - offset) / scale; }
};

struct NormalizedDocument {
    VGDocument doc;
    NormalizeTransform transform;
};

// --- curve geometry ---------------------------------------------------------

Vec eval_curve(const CurveSpec& c, double t);
// Unit tangent in traversal direction. Degenerate Bezier endpoints (p0 == p1
// or p1 == p2) fall back to the chord direction.
Vec curve_tangent(const CurveSpec& c, double t);
// Length of c restricted to [t0, t1]; closed form for Line/Arc, adaptive
// 16-point Gauss-Legendre for QuadBezier (relative panel error < 1e-8).
double arc_length(const CurveSpec& c, double t0, double t1);
// t with arc_length(c, 0, t) == s, to 1e-9 * total length, via bisection.
double arc_length_inverse(const CurveSpec& c, double s);

BoundingBox curve_bounds(const CurveSpec& c, double t0 = 0.0, double t1 = 1.0);
BoundingBox surface_bounds(const SurfaceSpec& s);
BoundingBox document_bounds(const VGDocument& doc);

// --- document-level operations ----------------------------------------------

// Field-path-tagged invariant checks; throws ValidationError.
void validate(const VGDocument& doc);

// Translate + uniformly scale so the bounding box is centered at the origin
// with diagonal 2. Throws on degenerate extent.
NormalizedDocument normalize_document(const VGDocument& doc);

// Canonical JSON format (External Interfaces). serialize(parse(text)) == text
// for text already in canonical form.
VGDocument parse_canonical(const std::string& text);
std::string serialize_canonical(const VGDocument& doc);

// SVG subset importer: line, polyline, polygon, rect, circle, path (M,L,Q,A,Z).
VGDocument parse_svg(const std::string& text);

} // namespace rendnet::vgdoc
