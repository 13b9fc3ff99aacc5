#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rendnet/error.hpp"
#include "rendnet/hypergraph.hpp"

namespace rendnet::hypergraph {

using vgdoc::CurveKind;
using vgdoc::CurveSpec;
using vgdoc::SurfaceKind;
using vgdoc::SurfaceSpec;
using vgdoc::VGDocument;
using vgdoc::arc_length;
using vgdoc::arc_length_inverse;
using vgdoc::curve_tangent;
using vgdoc::eval_curve;

// --- surface charts ---------------------------------------------------------

namespace {

// In-plane frame plus the 2D chart for one surface: Rect uses edge-vector
// coordinates in [0,1]^2, Disk the unit disk, Polygon its bounding-box chart.
struct SurfaceChart {
    const SurfaceSpec* s = nullptr;
    Vec origin, u_axis, v_axis, normal; // u/v unit vectors in the surface plane
    double u_scale = 1.0, v_scale = 1.0;
    std::vector<std::array<double, 2>> flat_ring; // polygon ring in plane coords
    double fu0 = 0.0, fv0 = 0.0, fu1 = 1.0, fv1 = 1.0; // ring bbox

    std::array<double, 2> plane_coords(const Vec& p) const {
        Vec d = p - origin;
        return {dot(d, u_axis), dot(d, v_axis)};
    }
    double out_of_plane(const Vec& p) const { return std::abs(dot(p - origin, normal)); }
};

bool point_in_ring(const std::vector<std::array<double, 2>>& ring, double x, double y,
                   double tol) {
    bool inside = false;
    size_t n = ring.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        double xi = ring[i][0], yi = ring[i][1];
        double xj = ring[j][0], yj = ring[j][1];
        // Boundary within tol counts as inside.
        double ex = xj - xi, ey = yj - yi;
        double len2 = ex * ex + ey * ey;
        if (len2 > 0) {
            double t = std::min(1.0, std::max(0.0, ((x - xi) * ex + (y - yi) * ey) / len2));
            double dx = x - (xi + t * ex), dy = y - (yi + t * ey);
            if (dx * dx + dy * dy <= tol * tol) return true;
        }
        if ((yi > y) != (yj > y)) {
            double xc = xi + (y - yi) / (yj - yi) * (xj - xi);
            if (x < xc) inside = !inside;
        }
    }
    return inside;
}

SurfaceChart make_chart(const SurfaceSpec& s) {
    SurfaceChart c;
    c.s = &s;
    switch (s.kind) {
        case SurfaceKind::Rect: {
            c.origin = s.origin;
            c.u_scale = norm(s.u);
            c.v_scale = norm(s.v);
            c.u_axis = s.u / c.u_scale;
            c.v_axis = s.v / c.v_scale;
            c.normal = normalized(cross(s.u, s.v));
            break;
        }
        case SurfaceKind::Disk: {
            c.origin = s.center;
            c.u_axis = s.ax;
            c.v_axis = s.ay;
            c.u_scale = c.v_scale = s.radius;
            c.normal = cross(s.ax, s.ay);
            break;
        }
        case SurfaceKind::Polygon: {
            c.origin = s.ring[0];
            Vec n;
            double best = 0.0;
            for (size_t i = 1; i + 1 < s.ring.size(); ++i) {
                Vec cr = cross(s.ring[i] - s.ring[0], s.ring[i + 1] - s.ring[0]);
                if (norm2(cr) > best) {
                    best = norm2(cr);
                    n = cr;
                }
            }
            c.normal = normalized(n);
            Vec longest;
            for (size_t i = 1; i < s.ring.size(); ++i) {
                Vec d = s.ring[i] - s.ring[0];
                d = d - c.normal * dot(d, c.normal);
                if (norm2(d) > norm2(longest)) longest = d;
            }
            c.u_axis = normalized(longest);
            c.v_axis = cross(c.normal, c.u_axis);
            c.fu0 = c.fv0 = std::numeric_limits<double>::infinity();
            c.fu1 = c.fv1 = -std::numeric_limits<double>::infinity();
            for (const Vec& p : s.ring) {
                auto [u, v] = c.plane_coords(p);
                c.flat_ring.push_back({u, v});
                c.fu0 = std::min(c.fu0, u);
                c.fv0 = std::min(c.fv0, v);
                c.fu1 = std::max(c.fu1, u);
                c.fv1 = std::max(c.fv1, v);
            }
            break;
        }
    }
    return c;
}

// Closed-region membership within tol, and the chart coordinates t_{i,S}.
bool chart_contains(const SurfaceChart& c, const Vec& p, double tol) {
    if (c.out_of_plane(p) > tol) return false;
    auto [u, v] = c.plane_coords(p);
    switch (c.s->kind) {
        case SurfaceKind::Rect:
            return u >= -tol && u <= c.u_scale + tol && v >= -tol && v <= c.v_scale + tol;
        case SurfaceKind::Disk:
            return std::hypot(u, v) <= c.s->radius + tol;
        case SurfaceKind::Polygon:
            return point_in_ring(c.flat_ring, u, v, tol);
    }
    return false;
}

std::array<double, 2> chart_param(const SurfaceChart& c, const Vec& p) {
    auto [u, v] = c.plane_coords(p);
    auto clamp01 = [](double x) { return std::min(1.0, std::max(0.0, x)); };
    switch (c.s->kind) {
        case SurfaceKind::Rect:
            return {clamp01(u / c.u_scale), clamp01(v / c.v_scale)};
        case SurfaceKind::Disk: {
            double pu = u / c.s->radius, pv = v / c.s->radius;
            double r = std::hypot(pu, pv);
            if (r > 1.0) {
                pu /= r;
                pv /= r;
            }
            return {pu, pv};
        }
        case SurfaceKind::Polygon: {
            double du = std::max(c.fu1 - c.fu0, 1e-300);
            double dv = std::max(c.fv1 - c.fv0, 1e-300);
            return {clamp01((u - c.fu0) / du), clamp01((v - c.fv0) / dv)};
        }
    }
    return {0.0, 0.0};
}

struct NodeBuilder {
    std::vector<HNode> nodes;
    double tol;

    explicit NodeBuilder(double tol_) : tol(tol_) {}

    // Returns the node id the point landed in; merges within tol.
    int add(Vec p, const Anchor& anchor) {
        for (auto& n : nodes) {
            if (distance(n.position, p) <= tol) {
                for (const auto& a : n.anchors)
                    if (a.curve == anchor.curve && std::abs(a.t - anchor.t) <= 1e-12)
                        return n.id;
                n.anchors.push_back(anchor);
                return n.id;
            }
        }
        HNode n;
        n.id = static_cast<int>(nodes.size());
        n.position = p;
        n.anchors.push_back(anchor);
        nodes.push_back(std::move(n));
        return n.id;
    }
};

} // namespace

std::vector<HNode> select_nodes(const VGDocument& doc, double tol) {
    NodeBuilder builder(tol);
    int nc = static_cast<int>(doc.curves.size());

    for (int i = 0; i < nc; ++i) {
        builder.add(eval_curve(doc.curves[i], 0.0), {i, 0.0});
        builder.add(eval_curve(doc.curves[i], 1.0), {i, 1.0});
    }
    for (int i = 0; i < nc; ++i) {
        for (int j = i + 1; j < nc; ++j) {
            IntersectionResult res = intersect_curves(doc.curves[i], doc.curves[j], tol);
            for (auto [ta, tb] : res.params) {
                Vec p = eval_curve(doc.curves[i], ta);
                int id = builder.add(p, {i, ta});
                builder.add(builder.nodes[id].position, {j, tb});
            }
        }
    }
    // Farthest point sampling in arc-length space tops up non-line curves to
    // four nodes each.
    for (int i = 0; i < nc; ++i) {
        const CurveSpec& c = doc.curves[i];
        if (c.kind == CurveKind::Line) continue;
        double total = arc_length(c, 0.0, 1.0);
        for (int guard = 0; guard < 16; ++guard) {
            std::vector<int> ids;
            std::vector<double> ss;
            for (const auto& n : builder.nodes) {
                for (const auto& a : n.anchors) {
                    if (a.curve != i) continue;
                    if (std::find(ids.begin(), ids.end(), n.id) == ids.end()) ids.push_back(n.id);
                    ss.push_back(arc_length(c, 0.0, a.t));
                }
            }
            if (ids.size() >= 4) break;
            std::sort(ss.begin(), ss.end());
            double best_gap = -1.0, best_s = 0.5 * total;
            for (size_t k = 0; k + 1 < ss.size(); ++k) {
                double gap = ss[k + 1] - ss[k];
                if (gap > best_gap) {
                    best_gap = gap;
                    best_s = 0.5 * (ss[k] + ss[k + 1]);
                }
            }
            double t = arc_length_inverse(c, best_s);
            size_t before = builder.nodes.size();
            builder.add(eval_curve(c, t), {i, t});
            if (builder.nodes.size() == before) break; // landed on an existing node
        }
    }
    return builder.nodes;
}

std::vector<HEdge> split_curves(const VGDocument& doc, const std::vector<HNode>& nodes) {
    std::vector<HEdge> edges;
    int nc = static_cast<int>(doc.curves.size());
    for (int i = 0; i < nc; ++i) {
        const CurveSpec& c = doc.curves[i];
        std::vector<std::pair<double, int>> anchors; // (t, node)
        for (const auto& n : nodes)
            for (const auto& a : n.anchors)
                if (a.curve == i) anchors.push_back({a.t, n.id});
        std::sort(anchors.begin(), anchors.end());
        if (anchors.size() < 2)
            throw Error("internal: curve " + std::to_string(i) + " has fewer than 2 anchors");
        // Drop repeated anchors of one geometric passage.
        std::vector<std::pair<double, int>> uniq;
        for (const auto& a : anchors) {
            if (!uniq.empty() && a.second == uniq.back().second &&
                arc_length(c, uniq.back().first, a.first) <= 1e-9)
                continue;
            if (!uniq.empty() && a.first - uniq.back().first <= 1e-12) continue;
            uniq.push_back(a);
        }
        for (size_t k = 0; k + 1 < uniq.size(); ++k) {
            HEdge e;
            e.id = static_cast<int>(edges.size());
            e.curve = i;
            e.t0 = uniq[k].first;
            e.t1 = uniq[k + 1].first;
            e.n0 = uniq[k].second;
            e.n1 = uniq[k + 1].second;
            e.start_dir = curve_tangent(c, e.t0);
            e.end_dir = curve_tangent(c, e.t1);
            e.type = static_cast<int>(c.kind);
            edges.push_back(e);
        }
    }
    return edges;
}

std::vector<HSurface> attach_surfaces(const VGDocument& doc, const std::vector<HNode>& nodes,
                                      double tol) {
    std::vector<HSurface> out;
    for (size_t si = 0; si < doc.surfaces.size(); ++si) {
        SurfaceChart chart = make_chart(doc.surfaces[si]);
        HSurface hs;
        hs.surface = static_cast<int>(si);
        hs.type = static_cast<int>(doc.surfaces[si].kind);
        for (const auto& n : nodes) {
            if (chart_contains(chart, n.position, tol)) {
                hs.members.push_back(n.id);
                hs.param_coords.push_back(chart_param(chart, n.position));
            }
        }
        if (hs.members.size() < 3) {
            std::fprintf(stderr, "rendnet: dropping surface %zu with %zu member nodes\n", si,
                         hs.members.size());
            continue;
        }
        hs.id = static_cast<int>(out.size());
        out.push_back(std::move(hs));
    }
    return out;
}

Hypergraph build_hypergraph(const VGDocument& doc, const BuildConfig& config) {
    Hypergraph hg;
    if (config.normalize) {
        auto normalized = vgdoc::normalize_document(doc);
        hg.doc = std::move(normalized.doc);
        hg.transform = normalized.transform;
    } else {
        hg.doc = doc;
    }
    hg.nodes = select_nodes(hg.doc, config.merge_tol);
    hg.edges = split_curves(hg.doc, hg.nodes);
    hg.surfaces = attach_surfaces(hg.doc, hg.nodes, config.merge_tol);
    hg.adjacency.assign(hg.nodes.size(), {});
    for (const auto& e : hg.edges) {
        hg.adjacency[e.n0].push_back(e.id);
        if (e.n1 != e.n0) hg.adjacency[e.n1].push_back(e.id);
    }
    hg.incidence.assign(hg.nodes.size(), {});
    for (const auto& s : hg.surfaces)
        for (int m : s.members) hg.incidence[m].push_back(s.id);
    return hg;
}

bool param_in_surface(const SurfaceSpec& spec, double u, double v) {
    switch (spec.kind) {
        case SurfaceKind::Rect:
            return u >= -1e-12 && u <= 1.0 + 1e-12 && v >= -1e-12 && v <= 1.0 + 1e-12;
        case SurfaceKind::Disk:
            return u * u + v * v <= 1.0 + 1e-12;
        case SurfaceKind::Polygon: {
            SurfaceChart c = make_chart(spec);
            double du = std::max(c.fu1 - c.fu0, 1e-300);
            double dv = std::max(c.fv1 - c.fv0, 1e-300);
            return point_in_ring(c.flat_ring, c.fu0 + u * du, c.fv0 + v * dv,
                                 1e-9 * std::max(du, dv));
        }
    }
    return false;
}

std::string dump(const Hypergraph& hg) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& n : hg.nodes) {
        os << "N " << n.id << " " << n.position.x << " " << n.position.y;
        if (hg.doc.dim == 3) os << " " << n.position.z;
        os << "\n";
    }
    for (const auto& e : hg.edges)
        os << "E " << e.id << " " << e.n0 << " " << e.n1 << " "
           << vgdoc::to_string(static_cast<CurveKind>(e.type)) << "\n";
    for (const auto& s : hg.surfaces) {
        os << "S " << s.id << " " << vgdoc::to_string(static_cast<SurfaceKind>(s.type));
        for (int m : s.members) os << " " << m;
        os << "\n";
    }
    return os.str();
}

} // namespace rendnet::hypergraph
