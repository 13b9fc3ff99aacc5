#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "rendnet/error.hpp"
#include "rendnet/kernels.hpp"
#include "rendnet/raster_plan.hpp"

namespace rendnet::lsr {

using hypergraph::HEdge;
using hypergraph::HSurface;
using hypergraph::Hypergraph;
using vgdoc::CurveKind;
using vgdoc::CurveSpec;
using vgdoc::arc_length;
using vgdoc::eval_curve;

namespace {

// Cumulative arc-length table over one edge's parameter range, for fast
// equal-arc-length inversion during sampling.
struct ArcTable {
    const CurveSpec* curve;
    double t0, t1;
    std::vector<double> cum; // cum[j] = length of [t0, t_j], 64 panels
    double total;

    ArcTable(const CurveSpec& c, double a, double b) : curve(&c), t0(a), t1(b) {
        const int panels = 64;
        cum.resize(panels + 1);
        cum[0] = 0.0;
        for (int j = 1; j <= panels; ++j) {
            double ta = t0 + (t1 - t0) * (j - 1) / panels;
            double tb = t0 + (t1 - t0) * j / panels;
            cum[j] = cum[j - 1] + arc_length(*curve, ta, tb);
        }
        total = cum.back();
    }

    double invert(double s) const {
        if (s <= 0.0) return t0;
        if (s >= total) return t1;
        if (curve->kind != CurveKind::QuadBezier) return t0 + (t1 - t0) * (s / total);
        size_t j = std::upper_bound(cum.begin(), cum.end(), s) - cum.begin();
        if (j == 0) j = 1;
        if (j > cum.size() - 1) j = cum.size() - 1;
        int panels = static_cast<int>(cum.size()) - 1;
        double ta = t0 + (t1 - t0) * (j - 1) / panels;
        double tb = t0 + (t1 - t0) * j / panels;
        double t = ta + (tb - ta) * (s - cum[j - 1]) / std::max(cum[j] - cum[j - 1], 1e-300);
        // Newton polish on len(t) - s.
        for (int it = 0; it < 4; ++it) {
            double len = cum[j - 1] + arc_length(*curve, ta, std::max(ta, std::min(t, t1)));
            Vec d = (eval_curve(*curve, std::min(t + 1e-9, t1)) -
                     eval_curve(*curve, std::max(t - 1e-9, t0))) /
                    (std::min(t + 1e-9, t1) - std::max(t - 1e-9, t0));
            double speed = norm(d);
            if (speed < 1e-300) break;
            t -= (len - s) / speed;
            t = std::max(t0, std::min(t1, t));
        }
        return t;
    }
};

double triangle_area(const Vec& a, const Vec& b, const Vec& c) {
    return 0.5 * norm(cross(b - a, c - a));
}

} // namespace

std::vector<Fragment> sample_curve_fragments(const Hypergraph& hg, const HEdge& edge,
                                             double spacing) {
    if (!(spacing > 0.0)) throw DomainError("fragment spacing must be > 0");
    const CurveSpec& c = hg.doc.curves[edge.curve];
    ArcTable table(c, edge.t0, edge.t1);
    double length = table.total;
    int steps = std::max(1, static_cast<int>(std::ceil(length / spacing)));
    double s = length / steps;
    std::vector<Fragment> out;
    out.reserve(steps + 1);
    for (int k = 0; k <= steps; ++k) {
        double sk = std::min(length, k * s);
        Fragment f;
        f.position = eval_curve(c, table.invert(sk));
        f.simplex = edge.id;
        f.arity = 2;
        f.nodes = {edge.n0, edge.n1, -1};
        double w1 = length > 0.0 ? sk / length : 0.0;
        f.weights = {1.0 - w1, w1, 0.0};
        out.push_back(f);
    }
    return out;
}

std::vector<Triangle> clip_triangles(const HSurface& surface, const vgdoc::SurfaceSpec& spec,
                                     const std::vector<Triangle>& triangles) {
    std::vector<Triangle> kept;
    for (const Triangle& t : triangles) {
        double u = 0.0, v = 0.0;
        for (int k = 0; k < 3; ++k) {
            u += surface.param_coords[t[k]][0];
            v += surface.param_coords[t[k]][1];
        }
        if (hypergraph::param_in_surface(spec, u / 3.0, v / 3.0)) kept.push_back(t);
    }
    if (kept.empty() && !triangles.empty())
        std::fprintf(stderr, "rendnet: surface %d: all triangles clipped away\n", surface.id);
    return kept;
}

std::vector<Fragment> sample_surface_fragments(const Hypergraph& hg, const HSurface& surface,
                                               const std::vector<Triangle>& triangles,
                                               double density, Rng& rng) {
    if (!(density > 0.0)) throw DomainError("surface fragment density must be > 0");
    if (triangles.empty()) return {};

    // Triangle vertices are indices into surface.members.
    std::vector<double> cum_area(triangles.size() + 1, 0.0);
    for (size_t t = 0; t < triangles.size(); ++t) {
        const Vec& a = hg.nodes[surface.members[triangles[t][0]]].position;
        const Vec& b = hg.nodes[surface.members[triangles[t][1]]].position;
        const Vec& c = hg.nodes[surface.members[triangles[t][2]]].position;
        cum_area[t + 1] = cum_area[t] + triangle_area(a, b, c);
    }
    double area = cum_area.back();
    if (!(area > 1e-280)) throw DomainError("degenerate surface: zero mesh area");

    int target = std::max(8, static_cast<int>(std::llround(density * area)));
    int n_cand = 4 * target;

    struct Cand {
        Vec pos;
        int tri;
        std::array<double, 3> w;
        double weight = 0.0;
        bool alive = true;
    };
    std::vector<Cand> cands(n_cand);
    for (int i = 0; i < n_cand; ++i) {
        double pick = rng.uniform() * area;
        size_t t = std::upper_bound(cum_area.begin(), cum_area.end(), pick) - cum_area.begin();
        t = std::min(std::max<size_t>(t, 1), triangles.size()) - 1;
        double u = rng.uniform(), v = rng.uniform();
        if (u + v > 1.0) {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        Cand& cd = cands[i];
        cd.tri = static_cast<int>(t);
        cd.w = {1.0 - u - v, u, v};
        const Vec& a = hg.nodes[surface.members[triangles[t][0]]].position;
        const Vec& b = hg.nodes[surface.members[triangles[t][1]]].position;
        const Vec& c = hg.nodes[surface.members[triangles[t][2]]].position;
        cd.pos = a * cd.w[0] + b * cd.w[1] + c * cd.w[2];
    }

    // Weighted sample elimination (hexagonal-packing radius, weight
    // exponent 8, neighborhood 2r).
    double r = std::sqrt(area / (target * std::sqrt(3.0)));
    double r2 = 2.0 * r;

    BoundingBox bb;
    for (const auto& cd : cands) bb.expand(cd.pos);
    double cell = r2;
    int gx = std::max(1, static_cast<int>((bb.hi.x - bb.lo.x) / cell) + 1);
    int gy = std::max(1, static_cast<int>((bb.hi.y - bb.lo.y) / cell) + 1);
    int gz = std::max(1, static_cast<int>((bb.hi.z - bb.lo.z) / cell) + 1);
    auto cell_of = [&](const Vec& p) {
        int ix = std::min(gx - 1, std::max(0, static_cast<int>((p.x - bb.lo.x) / cell)));
        int iy = std::min(gy - 1, std::max(0, static_cast<int>((p.y - bb.lo.y) / cell)));
        int iz = std::min(gz - 1, std::max(0, static_cast<int>((p.z - bb.lo.z) / cell)));
        return (iz * gy + iy) * gx + ix;
    };
    std::vector<std::vector<int>> grid(static_cast<size_t>(gx) * gy * gz);
    for (int i = 0; i < n_cand; ++i) grid[cell_of(cands[i].pos)].push_back(i);

    auto for_neighbors = [&](int i, auto&& fn) {
        const Vec& p = cands[i].pos;
        int ix = std::min(gx - 1, std::max(0, static_cast<int>((p.x - bb.lo.x) / cell)));
        int iy = std::min(gy - 1, std::max(0, static_cast<int>((p.y - bb.lo.y) / cell)));
        int iz = std::min(gz - 1, std::max(0, static_cast<int>((p.z - bb.lo.z) / cell)));
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    int cx = ix + dx, cy = iy + dy, cz = iz + dz;
                    if (cx < 0 || cy < 0 || cz < 0 || cx >= gx || cy >= gy || cz >= gz) continue;
                    for (int j : grid[(static_cast<size_t>(cz) * gy + cy) * gx + cx]) {
                        if (j == i) continue;
                        double d = distance(p, cands[j].pos);
                        if (d < r2) fn(j, d);
                    }
                }
    };

    auto contribution = [&](double d) {
        double base = 1.0 - d / r2;
        double b2 = base * base, b4 = b2 * b2;
        return b4 * b4;
    };
    for (int i = 0; i < n_cand; ++i)
        for_neighbors(i, [&](int, double d) { cands[i].weight += contribution(d); });

    // Indexed max-heap keyed by (weight, index).
    std::vector<int> heap(n_cand), pos(n_cand);
    std::iota(heap.begin(), heap.end(), 0);
    auto heavier = [&](int a, int b) {
        return cands[a].weight > cands[b].weight ||
               (cands[a].weight == cands[b].weight && a > b);
    };
    auto sift_down = [&](int at) {
        int sz = static_cast<int>(heap.size());
        for (;;) {
            int l = 2 * at + 1, rgt = 2 * at + 2, top = at;
            if (l < sz && heavier(heap[l], heap[top])) top = l;
            if (rgt < sz && heavier(heap[rgt], heap[top])) top = rgt;
            if (top == at) break;
            std::swap(heap[at], heap[top]);
            pos[heap[at]] = at;
            pos[heap[top]] = top;
            at = top;
        }
    };
    auto sift_up = [&](int at) {
        while (at > 0) {
            int parent = (at - 1) / 2;
            if (!heavier(heap[at], heap[parent])) break;
            std::swap(heap[at], heap[parent]);
            pos[heap[at]] = at;
            pos[heap[parent]] = parent;
            at = parent;
        }
    };
    for (int i = 0; i < n_cand; ++i) pos[i] = i;
    for (int i = n_cand / 2; i >= 0; --i) sift_down(i);

    int alive = n_cand;
    while (alive > target) {
        int victim = heap[0];
        heap[0] = heap.back();
        pos[heap[0]] = 0;
        heap.pop_back();
        sift_down(0);
        cands[victim].alive = false;
        --alive;
        for_neighbors(victim, [&](int j, double d) {
            if (!cands[j].alive) return;
            cands[j].weight -= contribution(d);
            sift_down(pos[j]);
            sift_up(pos[j]);
        });
    }

    std::vector<Fragment> out;
    out.reserve(target);
    for (int i = 0; i < n_cand; ++i) {
        if (!cands[i].alive) continue;
        Fragment f;
        f.position = cands[i].pos;
        f.simplex = cands[i].tri; // local triangle index; plan build remaps
        f.arity = 3;
        const Triangle& t = triangles[cands[i].tri];
        f.nodes = {surface.members[t[0]], surface.members[t[1]], surface.members[t[2]]};
        f.weights = cands[i].w;
        out.push_back(f);
    }
    return out;
}

void interpolate_forward(const InterpolationMap& map, const double* H, int channels, double* F) {
    kernels::sparse_apply(map.fwd_offsets.data(), map.fwd_nodes.data(), map.fwd_weights.data(),
                          map.fragment_count, H, channels, F);
}

void interpolate_backward(const InterpolationMap& map, const double* dF, int channels,
                          double* dH) {
    kernels::sparse_apply(map.bwd_offsets.data(), map.bwd_fragments.data(),
                          map.bwd_weights.data(), map.node_count, dF, channels, dH);
}

std::vector<std::vector<int32_t>> knn_neighborhoods(const std::vector<Fragment>& fragments,
                                                    const std::vector<Vec>& node_positions,
                                                    int k) {
    if (k < 1) throw DomainError("knn k must be >= 1");
    if (fragments.empty()) throw DomainError("knn over an empty fragment set");
    int m = static_cast<int>(fragments.size());
    int take = std::min(k, m);

    BoundingBox bb;
    for (const auto& f : fragments) bb.expand(f.position);
    for (const auto& p : node_positions) bb.expand(p);
    double diag = std::max(bb.diagonal(), 1e-12);
    double cell = std::max(diag / std::max(4.0, std::cbrt(static_cast<double>(m))), 1e-12);
    int gx = static_cast<int>((bb.hi.x - bb.lo.x) / cell) + 1;
    int gy = static_cast<int>((bb.hi.y - bb.lo.y) / cell) + 1;
    int gz = static_cast<int>((bb.hi.z - bb.lo.z) / cell) + 1;
    std::vector<std::vector<int32_t>> grid(static_cast<size_t>(gx) * gy * gz);
    auto clampi = [](int v, int hi) { return std::min(hi - 1, std::max(0, v)); };
    auto cell_xyz = [&](const Vec& p) {
        return std::array<int, 3>{clampi(static_cast<int>((p.x - bb.lo.x) / cell), gx),
                                  clampi(static_cast<int>((p.y - bb.lo.y) / cell), gy),
                                  clampi(static_cast<int>((p.z - bb.lo.z) / cell), gz)};
    };
    for (int i = 0; i < m; ++i) {
        auto [ix, iy, iz] = cell_xyz(fragments[i].position);
        grid[(static_cast<size_t>(iz) * gy + iy) * gx + ix].push_back(i);
    }

    int n = static_cast<int>(node_positions.size());
    std::vector<std::vector<int32_t>> result(n);

#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < n; ++i) {
        const Vec& q = node_positions[i];
        auto [qx, qy, qz] = cell_xyz(q);
        // (distance^2, index) candidates, grown ring by ring.
        std::vector<std::pair<double, int32_t>> cand;
        int max_ring = std::max({gx, gy, gz});
        for (int ring = 0; ring <= max_ring; ++ring) {
            for (int dz = -ring; dz <= ring; ++dz)
                for (int dy = -ring; dy <= ring; ++dy)
                    for (int dx = -ring; dx <= ring; ++dx) {
                        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != ring) continue;
                        int cx = qx + dx, cy = qy + dy, cz = qz + dz;
                        if (cx < 0 || cy < 0 || cz < 0 || cx >= gx || cy >= gy || cz >= gz)
                            continue;
                        for (int32_t j : grid[(static_cast<size_t>(cz) * gy + cy) * gx + cx]) {
                            double d2 = norm2(fragments[j].position - q);
                            cand.push_back({d2, j});
                        }
                    }
            if (static_cast<int>(cand.size()) >= take) {
                std::nth_element(cand.begin(), cand.begin() + (take - 1), cand.end());
                double kth = cand[take - 1].first;
                double safe = static_cast<double>(ring) * cell;
                if (kth <= safe * safe || ring == max_ring) break;
            }
        }
        std::sort(cand.begin(), cand.end());
        result[i].reserve(take);
        for (int j = 0; j < take; ++j) result[i].push_back(cand[j].second);
    }
    return result;
}

RasterPlan build_raster_plan(const Hypergraph& hg, const PlanConfig& config) {
    RasterPlan plan;
    plan.knn_k = config.knn_k;

    uint64_t digest = fnv1a64(vgdoc::serialize_canonical(hg.doc));
    char seed_bytes[8];
    std::memcpy(seed_bytes, &config.seed, 8);
    Rng rng(fnv1a64(std::string_view(seed_bytes, 8), digest));

    for (const auto& e : hg.edges) {
        plan.simplices.edge_simplices.push_back({e.n0, e.n1});
        auto frags = sample_curve_fragments(hg, e, config.curve_spacing);
        plan.fragments.insert(plan.fragments.end(), frags.begin(), frags.end());
    }

    int tri_base = static_cast<int>(hg.edges.size());
    for (const auto& s : hg.surfaces) {
        std::vector<std::array<double, 2>> params(s.param_coords.begin(), s.param_coords.end());
        std::vector<Triangle> tris;
        int range_begin = static_cast<int>(plan.simplices.surface_triangles.size());
        try {
            tris = clip_triangles(s, hg.doc.surfaces[s.surface], delaunay_2d(params));
        } catch (const DomainError&) {
            // Collinear parameter set: degenerate surface, no fragments.
            std::fprintf(stderr, "rendnet: surface %d has a collinear chart; skipped\n", s.id);
            plan.simplices.triangle_ranges.push_back({range_begin, range_begin});
            continue;
        }
        if (!tris.empty()) {
            auto frags = sample_surface_fragments(hg, s, tris, config.surface_density, rng);
            for (auto& f : frags) f.simplex += tri_base + range_begin;
            plan.fragments.insert(plan.fragments.end(), frags.begin(), frags.end());
            for (const Triangle& t : tris)
                plan.simplices.surface_triangles.push_back(
                    {s.members[t[0]], s.members[t[1]], s.members[t[2]]});
        }
        plan.simplices.triangle_ranges.push_back(
            {range_begin, static_cast<int>(plan.simplices.surface_triangles.size())});
    }

    // Interpolation map, forward then exact transpose.
    int m = static_cast<int>(plan.fragments.size());
    int n = static_cast<int>(hg.nodes.size());
    auto& im = plan.interp;
    im.fragment_count = m;
    im.node_count = n;
    im.fwd_offsets.resize(m + 1, 0);
    for (int i = 0; i < m; ++i) im.fwd_offsets[i + 1] = im.fwd_offsets[i] + plan.fragments[i].arity;
    im.fwd_nodes.resize(im.fwd_offsets[m]);
    im.fwd_weights.resize(im.fwd_offsets[m]);
    for (int i = 0; i < m; ++i) {
        const Fragment& f = plan.fragments[i];
        for (int j = 0; j < f.arity; ++j) {
            im.fwd_nodes[im.fwd_offsets[i] + j] = f.nodes[j];
            im.fwd_weights[im.fwd_offsets[i] + j] = f.weights[j];
        }
    }
    im.bwd_offsets.assign(n + 1, 0);
    for (int32_t node : im.fwd_nodes) im.bwd_offsets[node + 1]++;
    for (int i = 0; i < n; ++i) im.bwd_offsets[i + 1] += im.bwd_offsets[i];
    im.bwd_fragments.resize(im.fwd_nodes.size());
    im.bwd_weights.resize(im.fwd_nodes.size());
    std::vector<int32_t> cursor(im.bwd_offsets.begin(), im.bwd_offsets.end() - 1);
    for (int i = 0; i < m; ++i) {
        for (int32_t j = im.fwd_offsets[i]; j < im.fwd_offsets[i + 1]; ++j) {
            int32_t node = im.fwd_nodes[j];
            im.bwd_fragments[cursor[node]] = i;
            im.bwd_weights[cursor[node]] = im.fwd_weights[j];
            ++cursor[node];
        }
    }

    std::vector<Vec> node_positions(n);
    for (int i = 0; i < n; ++i) node_positions[i] = hg.nodes[i].position;
    plan.neighborhoods = knn_neighborhoods(plan.fragments, node_positions, config.knn_k);
    return plan;
}

std::string to_ply(const std::vector<Fragment>& fragments,
                   const std::vector<std::array<uint8_t, 3>>& colors) {
    std::ostringstream os;
    os.precision(17);
    bool colored = !colors.empty();
    os << "ply\nformat ascii 1.0\nelement vertex " << fragments.size() << "\n"
       << "property double x\nproperty double y\nproperty double z\n";
    if (colored)
        os << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    os << "end_header\n";
    for (size_t i = 0; i < fragments.size(); ++i) {
        const Vec& p = fragments[i].position;
        os << p.x << " " << p.y << " " << p.z;
        if (colored)
            os << " " << int(colors[i][0]) << " " << int(colors[i][1]) << " " << int(colors[i][2]);
        os << "\n";
    }
    return os.str();
}

} // namespace rendnet::lsr
