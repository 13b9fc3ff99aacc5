#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rendnet/vgdoc.hpp"

namespace rendnet::hypergraph {

// A node anchor locates the node on one incident curve.
struct Anchor {
    int curve = -1;
    double t = 0.0;
};

struct HNode {
    int id = -1;
    Vec position;
    std::vector<Anchor> anchors;
};

// One curve segment between two consecutive nodes on its source curve.
struct HEdge {
    int id = -1;
    int n0 = -1, n1 = -1;       // node at t0, node at t1
    int curve = -1;
    double t0 = 0.0, t1 = 1.0;
    Vec start_dir, end_dir;     // unit tangents at t0, t1, oriented with +t
    int type = 0;               // CurveKind index for the one-hot
};

struct HSurface {
    int id = -1;
    int surface = -1;           // index into the source document
    int type = 0;               // SurfaceKind index for the one-hot
    std::vector<int> members;   // node ids, ascending
    std::vector<std::array<double, 2>> param_coords; // t_{i,S}, aligned with members
};

struct Hypergraph {
    vgdoc::VGDocument doc;      // normalized document the graph was built from
    vgdoc::NormalizeTransform transform;
    std::vector<HNode> nodes;
    std::vector<HEdge> edges;
    std::vector<HSurface> surfaces;
    std::vector<std::vector<int>> adjacency;      // node -> incident edge ids
    std::vector<std::vector<int>> incidence;      // node -> hyperedge ids
};

struct BuildConfig {
    double merge_tol = 1e-7; // in normalized units
    bool normalize = true;
};

// All parameter pairs (ta, tb) where the curves meet within tol. `overlap`
// reports coincident stretches (only their boundary points are returned).
struct IntersectionResult {
    std::vector<std::pair<double, double>> params;
    bool overlap = false;
};

IntersectionResult intersect_curves(const vgdoc::CurveSpec& a, const vgdoc::CurveSpec& b,
                                    double tol = 1e-7);

std::vector<HNode> select_nodes(const vgdoc::VGDocument& doc, double tol = 1e-7);
std::vector<HEdge> split_curves(const vgdoc::VGDocument& doc, const std::vector<HNode>& nodes);
std::vector<HSurface> attach_surfaces(const vgdoc::VGDocument& doc,
                                      const std::vector<HNode>& nodes, double tol = 1e-7);

Hypergraph build_hypergraph(const vgdoc::VGDocument& doc, const BuildConfig& config = {});

// Text dump, one line per entity (see External Interfaces).
std::string dump(const Hypergraph& hg);

// Region test in the surface's 2D parameter chart (Rect/Polygon: [0,1]^2 box
// chart; Disk: unit disk). Used for clipping triangles after Delaunay.
bool param_in_surface(const vgdoc::SurfaceSpec& spec, double u, double v);

} // namespace rendnet::hypergraph
