#include <algorithm>
#include <cmath>
#include <optional>

#include "rendnet/error.hpp"
#include "rendnet/hypergraph.hpp"

namespace rendnet::hypergraph {

using vgdoc::CurveKind;
using vgdoc::CurveSpec;
using vgdoc::curve_bounds;
using vgdoc::eval_curve;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Candidate {
    double ta, tb;
    double dist;
};

double clamp01(double t) { return std::min(1.0, std::max(0.0, t)); }

Vec arc_normal(const CurveSpec& arc) { return cross(arc.ax, arc.ay); }

// Arc parameter for a point at plane angle theta, or nullopt when theta lies
// outside the swept range (with `slack` radians of grace at the ends).
std::optional<double> arc_param_of_angle(const CurveSpec& arc, double theta, double slack) {
    double delta = theta - arc.start;
    double span = std::abs(arc.sweep);
    if (arc.sweep < 0) delta = -delta;
    delta = std::fmod(delta, kTwoPi);
    if (delta < 0) delta += kTwoPi;
    if (delta <= span + slack) return clamp01(delta / span);
    if (delta >= kTwoPi - slack) return 0.0; // wrapped just below the start
    return std::nullopt;
}

std::optional<double> arc_param_of_point(const CurveSpec& arc, const Vec& p, double tol) {
    Vec d = p - arc.center;
    double theta = std::atan2(dot(d, arc.ay), dot(d, arc.ax));
    return arc_param_of_angle(arc, theta, tol / arc.radius);
}

// Fraction along a straight segment, unclamped.
double segment_param(const Vec& p, const Vec& a, const Vec& b) {
    Vec d = b - a;
    return dot(p - a, d) / norm2(d);
}

// --- linear segments (Line, or a QuadBezier with collinear controls) ------

struct LinearView {
    Vec a, b;
    bool is_bezier = false;
    double alpha = 0.5; // chord fraction of p1 for straight Beziers
};

std::optional<LinearView> as_linear(const CurveSpec& c) {
    if (c.kind == CurveKind::Line) return LinearView{c.p0, c.p1, false, 0.5};
    if (c.kind != CurveKind::QuadBezier) return std::nullopt;
    Vec chord = c.p2 - c.p0;
    double len = norm(chord);
    if (len == 0.0) return std::nullopt;
    Vec off = c.p1 - c.p0;
    Vec dev = off - chord * (dot(off, chord) / (len * len));
    if (norm(dev) > 1e-12 * len) return std::nullopt;
    double alpha = dot(off, chord) / (len * len);
    if (alpha < -1e-12 || alpha > 1.0 + 1e-12) return std::nullopt; // control outside chord
    return LinearView{c.p0, c.p2, true, alpha};
}

// Maps a chord fraction s to the curve parameter of a LinearView.
double linear_param(const LinearView& v, double s) {
    if (!v.is_bezier) return clamp01(s);
    // s(t) = (1 - 2a) t^2 + 2a t for chord fraction a of the control point.
    double qa = 1.0 - 2.0 * v.alpha, qb = 2.0 * v.alpha, qc = -s;
    if (std::abs(qa) < 1e-15) return clamp01(s / std::max(qb, 1e-300));
    double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0) disc = 0;
    double t = (-qb + std::sqrt(disc)) / (2.0 * qa);
    if (t < -1e-9 || t > 1.0 + 1e-9) t = (-qb - std::sqrt(disc)) / (2.0 * qa);
    return clamp01(t);
}

void line_line(const LinearView& a, const LinearView& b, double tol, IntersectionResult& out) {
    Vec d1 = a.b - a.a, d2 = b.b - b.a, w = b.a - a.a;
    Vec n = cross(d1, d2);
    double denom = norm2(n);
    double scale = norm(d1) * norm(d2);
    if (denom <= 1e-24 * scale * scale) {
        // Parallel. Check collinearity via distance from b.a to line a.
        Vec off = w - d1 * (dot(w, d1) / norm2(d1));
        if (norm(off) > tol) return;
        double s0 = segment_param(b.a, a.a, a.b);
        double s1 = segment_param(b.b, a.a, a.b);
        double lo = std::max(0.0, std::min(s0, s1));
        double hi = std::min(1.0, std::max(s0, s1));
        if (lo > hi) {
            // Disjoint collinear segments; endpoints may still touch within tol.
            if (distance(a.b, b.a) <= tol)
                out.params.push_back({linear_param(a, 1.0), linear_param(b, 0.0)});
            else if (distance(a.b, b.b) <= tol)
                out.params.push_back({linear_param(a, 1.0), linear_param(b, 1.0)});
            else if (distance(a.a, b.a) <= tol)
                out.params.push_back({linear_param(a, 0.0), linear_param(b, 0.0)});
            else if (distance(a.a, b.b) <= tol)
                out.params.push_back({linear_param(a, 0.0), linear_param(b, 1.0)});
            return;
        }
        double span = (hi - lo) * norm(d1);
        for (double s : {lo, hi}) {
            Vec p = a.a + d1 * s;
            double sb = segment_param(p, b.a, b.b);
            out.params.push_back({linear_param(a, s), linear_param(b, clamp01(sb))});
        }
        if (span > tol) out.overlap = true;
        else out.params.pop_back(); // single touch point
        return;
    }
    // Closest approach of the two infinite lines.
    double d11 = norm2(d1), d22 = norm2(d2), d12 = dot(d1, d2);
    double det = d11 * d22 - d12 * d12;
    double s = (dot(w, d1) * d22 - dot(w, d2) * d12) / det;
    double u = (dot(w, d1) * d12 - dot(w, d2) * d11) / det;
    double slack_s = tol / std::sqrt(d11), slack_u = tol / std::sqrt(d22);
    if (s < -slack_s || s > 1.0 + slack_s || u < -slack_u || u > 1.0 + slack_u) return;
    s = clamp01(s);
    u = clamp01(u);
    if (distance(a.a + d1 * s, b.a + d2 * u) <= tol)
        out.params.push_back({linear_param(a, s), linear_param(b, u)});
}

void line_arc(const LinearView& ln, const CurveSpec& arc, double tol, bool swap,
              IntersectionResult& out) {
    Vec d = ln.b - ln.a;
    Vec n = arc_normal(arc);
    double dn = dot(d, n);
    double slack_t = tol / norm(d);
    auto emit = [&](double t_line, double t_arc) {
        double ta = linear_param(ln, t_line);
        if (swap)
            out.params.push_back({t_arc, ta});
        else
            out.params.push_back({ta, t_arc});
    };
    if (std::abs(dn) > 1e-9 * norm(d)) {
        // Transversal: single plane piercing.
        double t = dot(arc.center - ln.a, n) / dn;
        if (t < -slack_t || t > 1.0 + slack_t) return;
        Vec q = ln.a + d * clamp01(t);
        if (std::abs(distance(q, arc.center) - arc.radius) > tol) return;
        if (auto tb = arc_param_of_point(arc, q, tol)) emit(clamp01(t), *tb);
        return;
    }
    // (Near-)coplanar: project the segment into the arc plane and solve the
    // quadratic |p + t d - c|^2 = r^2.
    if (std::abs(dot(ln.a - arc.center, n)) > tol) return;
    Vec p0 = ln.a - n * dot(ln.a - arc.center, n);
    Vec dp = d - n * dn;
    double A = norm2(dp), B = 2.0 * dot(dp, p0 - arc.center);
    double C = norm2(p0 - arc.center) - arc.radius * arc.radius;
    double disc = B * B - 4.0 * A * C;
    std::vector<double> roots;
    if (disc >= 0.0) {
        double sq = std::sqrt(disc);
        roots.push_back((-B - sq) / (2.0 * A));
        roots.push_back((-B + sq) / (2.0 * A));
        if (sq <= 1e-9 * std::abs(B) + 1e-12) roots.pop_back(); // tangency, one root
    } else {
        // Near-tangent: closest point of the line to the circle.
        double tstar = -B / (2.0 * A);
        double f = C - B * B / (4.0 * A);
        double gap = std::sqrt(std::max(0.0, norm2(p0 + dp * tstar - arc.center))) - arc.radius;
        (void)f;
        if (std::abs(gap) <= tol) roots.push_back(tstar);
    }
    for (double t : roots) {
        if (t < -slack_t || t > 1.0 + slack_t) continue;
        double tc = clamp01(t);
        Vec q = ln.a + d * tc;
        if (std::abs(distance(q, arc.center) - arc.radius) > tol) continue;
        if (auto tb = arc_param_of_point(arc, q, tol)) emit(tc, *tb);
    }
}

void arc_arc(const CurveSpec& a, const CurveSpec& b, double tol, IntersectionResult& out) {
    Vec na = arc_normal(a), nb = arc_normal(b);
    auto emit_point = [&](const Vec& q) {
        auto ta = arc_param_of_point(a, q, tol);
        auto tb = arc_param_of_point(b, q, tol);
        if (ta && tb) out.params.push_back({*ta, *tb});
    };
    if (norm(cross(na, nb)) <= 1e-9) {
        if (std::abs(dot(b.center - a.center, na)) > tol) return;
        Vec sep = b.center - a.center;
        sep = sep - na * dot(sep, na);
        double d = norm(sep);
        if (d <= tol && std::abs(a.radius - b.radius) <= tol) {
            // Same circle: intersect the two angular intervals on the universal
            // cover; components longer than tol are overlap stretches and only
            // their boundary points are reported.
            double sa = std::min(a.start, a.start + a.sweep);
            double ea = std::max(a.start, a.start + a.sweep);
            double sb = std::min(b.start, b.start + b.sweep);
            double eb = std::max(b.start, b.start + b.sweep);
            double slack = tol / a.radius;
            for (int cycle = -2; cycle <= 2; ++cycle) {
                double shift = cycle * kTwoPi;
                double lo = std::max(sa, sb + shift), hi = std::min(ea, eb + shift);
                if (hi - lo < -slack) continue;
                if (hi - lo > slack) out.overlap = true;
                for (double theta : {lo, hi}) {
                    auto ta = arc_param_of_angle(a, theta, slack);
                    auto tb = arc_param_of_angle(b, theta - shift, slack);
                    if (ta && tb) out.params.push_back({*ta, *tb});
                    if (hi - lo <= slack) break; // single touch point
                }
            }
            return;
        }
        if (d <= tol) return; // concentric, different radii
        double A = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
        double h2 = a.radius * a.radius - A * A;
        Vec u = sep / d, v = cross(na, u);
        if (h2 < 0) {
            if (std::abs(d - (a.radius + b.radius)) <= tol ||
                std::abs(d - std::abs(a.radius - b.radius)) <= tol)
                emit_point(a.center + u * A);
            return;
        }
        double h = std::sqrt(h2);
        emit_point(a.center + u * A + v * h);
        if (h > 1e-9 * a.radius) emit_point(a.center + u * A - v * h);
        return;
    }
    // Non-coplanar: intersect circle a with plane b, then test against b.
    double A = a.radius * dot(nb, a.ax);
    double B = a.radius * dot(nb, a.ay);
    double C = dot(nb, b.center - a.center);
    double R = std::hypot(A, B);
    if (R < 1e-300) return;
    double base = std::atan2(B, A);
    std::vector<double> angles;
    double ratio = C / R;
    if (std::abs(ratio) <= 1.0) {
        double off = std::acos(std::min(1.0, std::max(-1.0, ratio)));
        angles.push_back(base + off);
        if (off > 1e-12) angles.push_back(base - off);
    } else if ((std::abs(C) - R) * 1.0 <= tol) {
        angles.push_back(base);
    }
    for (double theta : angles) {
        Vec q = a.center + a.radius * (std::cos(theta) * a.ax + std::sin(theta) * a.ay);
        if (std::abs(distance(q, b.center) - b.radius) > tol) continue;
        if (std::abs(dot(q - b.center, nb)) > tol) continue;
        emit_point(q);
    }
}

// --- subdivision for pairs involving a Bezier ------------------------------

void subdivide(const CurveSpec& a, double a0, double a1, const CurveSpec& b, double b0, double b1,
               double tol, int depth, std::vector<Candidate>& cands) {
    BoundingBox ba = curve_bounds(a, a0, a1);
    BoundingBox bb = curve_bounds(b, b0, b1);
    if (!ba.overlaps(bb, tol)) return;
    double da = ba.diagonal(), db = bb.diagonal();
    if (depth >= 40 || (da < tol && db < tol)) {
        double ta = 0.5 * (a0 + a1), tb = 0.5 * (b0 + b1);
        cands.push_back({ta, tb, distance(eval_curve(a, ta), eval_curve(b, tb))});
        return;
    }
    if (da >= db) {
        double m = 0.5 * (a0 + a1);
        subdivide(a, a0, m, b, b0, b1, tol, depth + 1, cands);
        subdivide(a, m, a1, b, b0, b1, tol, depth + 1, cands);
    } else {
        double m = 0.5 * (b0 + b1);
        subdivide(a, a0, a1, b, b0, m, tol, depth + 1, cands);
        subdivide(a, a0, a1, b, m, b1, tol, depth + 1, cands);
    }
}

Vec curve_derivative_fd(const CurveSpec& c, double t) {
    double h = 1e-7;
    double lo = std::max(0.0, t - h), hi = std::min(1.0, t + h);
    return (eval_curve(c, hi) - eval_curve(c, lo)) / (hi - lo);
}

// Gauss-Newton polish of a candidate parameter pair.
Candidate refine(const CurveSpec& a, const CurveSpec& b, Candidate c) {
    for (int it = 0; it < 8; ++it) {
        Vec pa = eval_curve(a, c.ta), pb = eval_curve(b, c.tb);
        Vec r = pa - pb;
        Vec ja = curve_derivative_fd(a, c.ta), jb = curve_derivative_fd(b, c.tb);
        double g11 = dot(ja, ja), g12 = -dot(ja, jb), g22 = dot(jb, jb);
        double r1 = -dot(r, ja), r2 = dot(r, jb);
        double det = g11 * g22 - g12 * g12;
        if (std::abs(det) < 1e-30) break;
        double dta = (r1 * g22 - r2 * g12) / det;
        double dtb = (g11 * r2 - g12 * r1) / det;
        c.ta = clamp01(c.ta + dta);
        c.tb = clamp01(c.tb + dtb);
        if (std::abs(dta) < 1e-14 && std::abs(dtb) < 1e-14) break;
    }
    c.dist = distance(eval_curve(a, c.ta), eval_curve(b, c.tb));
    return c;
}

bool identical_bezier(const CurveSpec& a, const CurveSpec& b, bool& reversed) {
    if (a.p0 == b.p0 && a.p1 == b.p1 && a.p2 == b.p2) {
        reversed = false;
        return true;
    }
    if (a.p0 == b.p2 && a.p1 == b.p1 && a.p2 == b.p0) {
        reversed = true;
        return true;
    }
    return false;
}

} // namespace

IntersectionResult intersect_curves(const CurveSpec& a, const CurveSpec& b, double tol) {
    if (!(tol > 0.0)) throw DomainError("intersection tolerance must be > 0");
    IntersectionResult out;

    bool a_bez = a.kind == CurveKind::QuadBezier;
    bool b_bez = b.kind == CurveKind::QuadBezier;

    if (!a_bez && !b_bez) {
        if (a.kind == CurveKind::Line && b.kind == CurveKind::Line) {
            line_line(*as_linear(a), *as_linear(b), tol, out);
        } else if (a.kind == CurveKind::Line) {
            line_arc(*as_linear(a), b, tol, false, out);
        } else if (b.kind == CurveKind::Line) {
            line_arc(*as_linear(b), a, tol, true, out);
        } else {
            arc_arc(a, b, tol, out);
        }
    } else {
        // Collinear straight segments (including degenerate Beziers) overlap;
        // handle them in closed form before subdividing.
        auto la = as_linear(a), lb = as_linear(b);
        if (la && lb) {
            line_line(*la, *lb, tol, out);
        } else if (a_bez && b_bez) {
            bool reversed = false;
            if (identical_bezier(a, b, reversed)) {
                out.overlap = true;
                out.params.push_back({0.0, reversed ? 1.0 : 0.0});
                out.params.push_back({1.0, reversed ? 0.0 : 1.0});
            }
        }
        if (out.params.empty() && !out.overlap) {
            std::vector<Candidate> cands;
            subdivide(a, 0.0, 1.0, b, 0.0, 1.0, tol, 0, cands);
            for (auto& c : cands) c = refine(a, b, c);
            std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
                return x.ta < y.ta || (x.ta == y.ta && x.tb < y.tb);
            });
            double merge_eps = std::max(tol, 1e-4);
            std::vector<Candidate> kept;
            for (const auto& c : cands) {
                if (c.dist > tol) continue;
                bool merged = false;
                for (auto& k : kept) {
                    if (std::abs(k.ta - c.ta) <= merge_eps && std::abs(k.tb - c.tb) <= merge_eps) {
                        if (c.dist < k.dist) k = c;
                        merged = true;
                        break;
                    }
                }
                if (!merged) kept.push_back(c);
            }
            for (const auto& k : kept) out.params.push_back({k.ta, k.tb});
        }
    }

    // Final dedup in parameter space and ordering by ta.
    std::sort(out.params.begin(), out.params.end());
    auto near = [&](const std::pair<double, double>& x, const std::pair<double, double>& y) {
        return std::abs(x.first - y.first) <= tol && std::abs(x.second - y.second) <= tol;
    };
    out.params.erase(std::unique(out.params.begin(), out.params.end(), near), out.params.end());
    return out;
}

} // namespace rendnet::hypergraph
