#include <algorithm>
#include <cmath>
#include <map>

#include "rendnet/delaunay.hpp"
#include "rendnet/error.hpp"

namespace rendnet::lsr {

namespace {

using P2 = std::array<double, 2>;

struct Circum {
    double cx, cy, r2;
    bool valid;
};

Circum circumcircle(const P2& a, const P2& b, const P2& c) {
    double d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    if (std::abs(d) < 1e-300) return {0, 0, 0, false};
    double a2 = a[0] * a[0] + a[1] * a[1];
    double b2 = b[0] * b[0] + b[1] * b[1];
    double c2 = c[0] * c[0] + c[1] * c[1];
    double ux = (a2 * (b[1] - c[1]) + b2 * (c[1] - a[1]) + c2 * (a[1] - b[1])) / d;
    double uy = (a2 * (c[0] - b[0]) + b2 * (a[0] - c[0]) + c2 * (b[0] - a[0])) / d;
    double dx = a[0] - ux, dy = a[1] - uy;
    return {ux, uy, dx * dx + dy * dy, true};
}

// < 0 inside, > 0 outside, 0 within the cocircular band.
int circum_side(const Circum& cc, const P2& p, double eps) {
    double dx = p[0] - cc.cx, dy = p[1] - cc.cy;
    double d2 = dx * dx + dy * dy;
    double band = eps * std::max(1.0, cc.r2);
    if (d2 < cc.r2 - band) return -1;
    if (d2 > cc.r2 + band) return 1;
    return 0;
}

struct Tri {
    Triangle v;
    Circum cc;
    bool alive = true;
};

} // namespace

std::vector<Triangle> delaunay_2d(const std::vector<P2>& input) {
    size_t n = input.size();
    if (n < 3) throw DomainError("delaunay_2d needs at least 3 points");

    double xmin = input[0][0], xmax = xmin, ymin = input[0][1], ymax = ymin;
    for (const auto& p : input) {
        xmin = std::min(xmin, p[0]);
        xmax = std::max(xmax, p[0]);
        ymin = std::min(ymin, p[1]);
        ymax = std::max(ymax, p[1]);
    }
    double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
    double area2_max = 0.0;
    for (size_t i = 1; i + 1 < n; ++i) {
        double a2 = std::abs((input[i][0] - input[0][0]) * (input[i + 1][1] - input[0][1]) -
                             (input[i][1] - input[0][1]) * (input[i + 1][0] - input[0][0]));
        area2_max = std::max(area2_max, a2);
    }
    bool collinear = true;
    for (size_t i = 1; i + 1 < n && collinear; ++i)
        for (size_t j = i + 1; j < n && collinear; ++j) {
            double a2 = std::abs((input[i][0] - input[0][0]) * (input[j][1] - input[0][1]) -
                                 (input[i][1] - input[0][1]) * (input[j][0] - input[0][0]));
            if (a2 > 1e-12 * span * span) collinear = false;
        }
    if (collinear) throw DomainError("delaunay_2d input is collinear");

    std::vector<P2> pts(input);
    double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
    double big = 64.0 * span;
    int s0 = static_cast<int>(n), s1 = s0 + 1, s2 = s0 + 2;
    pts.push_back({cx - big, cy - big});
    pts.push_back({cx + big, cy - big});
    pts.push_back({cx, cy + big});

    std::vector<Tri> tris;
    tris.push_back({{s0, s1, s2}, circumcircle(pts[s0], pts[s1], pts[s2]), true});

    const double eps = 1e-12;
    for (int ip = 0; ip < static_cast<int>(n); ++ip) {
        const P2& p = pts[ip];
        // Triangles whose circumcircle strictly contains p die; cocircular
        // triangles stay (the tie pass below fixes the diagonals).
        std::vector<int> bad;
        for (size_t t = 0; t < tris.size(); ++t) {
            if (!tris[t].alive) continue;
            if (circum_side(tris[t].cc, p, eps) < 0) bad.push_back(static_cast<int>(t));
        }
        if (bad.empty()) {
            // p cocircular or on an edge of the current structure: fall back to
            // locating the containing triangle and splitting it.
            for (size_t t = 0; t < tris.size() && bad.empty(); ++t) {
                if (!tris[t].alive) continue;
                const Triangle& v = tris[t].v;
                double d1 = (pts[v[1]][0] - pts[v[0]][0]) * (p[1] - pts[v[0]][1]) -
                            (pts[v[1]][1] - pts[v[0]][1]) * (p[0] - pts[v[0]][0]);
                double d2 = (pts[v[2]][0] - pts[v[1]][0]) * (p[1] - pts[v[1]][1]) -
                            (pts[v[2]][1] - pts[v[1]][1]) * (p[0] - pts[v[1]][0]);
                double d3 = (pts[v[0]][0] - pts[v[2]][0]) * (p[1] - pts[v[2]][1]) -
                            (pts[v[0]][1] - pts[v[2]][1]) * (p[0] - pts[v[2]][0]);
                bool has_neg = d1 < -eps || d2 < -eps || d3 < -eps;
                bool has_pos = d1 > eps || d2 > eps || d3 > eps;
                if (!(has_neg && has_pos)) bad.push_back(static_cast<int>(t));
            }
        }
        // Boundary polygon of the cavity = edges owned by exactly one bad triangle.
        std::map<std::pair<int, int>, std::pair<int, int>> edge_count;
        for (int t : bad) {
            const Triangle& v = tris[t].v;
            for (int k = 0; k < 3; ++k) {
                int a = v[k], b = v[(k + 1) % 3];
                auto key = std::minmax(a, b);
                auto it = edge_count.find(key);
                if (it == edge_count.end())
                    edge_count[key] = {a, b};
                else
                    edge_count.erase(it);
            }
        }
        for (int t : bad) tris[t].alive = false;
        for (const auto& [key, dir] : edge_count) {
            Tri nt;
            nt.v = {dir.first, dir.second, ip};
            nt.cc = circumcircle(pts[nt.v[0]], pts[nt.v[1]], pts[nt.v[2]]);
            if (!nt.cc.valid) continue; // degenerate sliver on the cavity rim
            tris.push_back(nt);
        }
    }

    std::vector<Triangle> result;
    for (const auto& t : tris) {
        if (!t.alive) continue;
        if (t.v[0] >= s0 || t.v[1] >= s0 || t.v[2] >= s0) continue;
        Triangle v = t.v;
        std::sort(v.begin(), v.end());
        result.push_back(v);
    }

    // Cocircular ties: flip interior diagonals of cocircular quads so the kept
    // diagonal touches the lowest point index.
    auto find_adjacent = [&](std::vector<Triangle>& ts) {
        std::map<std::pair<int, int>, std::vector<int>> by_edge;
        for (size_t t = 0; t < ts.size(); ++t)
            for (int k = 0; k < 3; ++k) {
                auto key = std::minmax(ts[t][k], ts[t][(k + 1) % 3]);
                by_edge[key].push_back(static_cast<int>(t));
            }
        return by_edge;
    };
    for (int pass = 0; pass < 8; ++pass) {
        bool changed = false;
        auto by_edge = find_adjacent(result);
        for (const auto& [edge, owners] : by_edge) {
            if (owners.size() != 2) continue;
            const Triangle& ta = result[owners[0]];
            const Triangle& tb = result[owners[1]];
            int oa = -1, ob = -1;
            for (int v : ta)
                if (v != edge.first && v != edge.second) oa = v;
            for (int v : tb)
                if (v != edge.first && v != edge.second) ob = v;
            if (oa < 0 || ob < 0 || oa == ob) continue;
            Circum cc = circumcircle(input[ta[0]], input[ta[1]], input[ta[2]]);
            if (!cc.valid || circum_side(cc, input[ob], eps) != 0) continue;
            int low = std::min({edge.first, edge.second, oa, ob});
            if (low == edge.first || low == edge.second) continue; // preferred already
            // New diagonal oa-ob must produce two valid triangles.
            auto orient = [&](int i, int j, int k) {
                return (input[j][0] - input[i][0]) * (input[k][1] - input[i][1]) -
                       (input[j][1] - input[i][1]) * (input[k][0] - input[i][0]);
            };
            if (orient(oa, ob, edge.first) * orient(oa, ob, edge.second) >= 0) continue;
            Triangle na{oa, ob, edge.first}, nb{oa, ob, edge.second};
            std::sort(na.begin(), na.end());
            std::sort(nb.begin(), nb.end());
            result[owners[0]] = na;
            result[owners[1]] = nb;
            changed = true;
            break; // adjacency map is stale; rebuild
        }
        if (!changed) break;
    }

    std::sort(result.begin(), result.end());
    return result;
}

} // namespace rendnet::lsr
