#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rendnet/delaunay.hpp"
#include "rendnet/hypergraph.hpp"
#include "rendnet/rng.hpp"

namespace rendnet::lsr {

// One rasterized sample point. Weights are barycentric over the owning
// simplex's nodes: two entries for curve 1-simplices, three for triangles.
struct Fragment {
    Vec position;
    int simplex = -1;
    std::array<int, 3> nodes{-1, -1, -1};
    std::array<double, 3> weights{0.0, 0.0, 0.0};
    int arity = 2;
};

// Simplices referenced by fragment provenance: all edge 1-simplices first,
// then surface triangles.
struct SimplexTable {
    std::vector<std::array<int, 2>> edge_simplices;           // node pairs, by edge id
    std::vector<Triangle> surface_triangles;                  // node id triples
    std::vector<std::pair<int, int>> triangle_ranges;         // per hyperedge: [begin, end)
};

// Fixed sparse linear map from node attributes to fragment attributes,
// stored both ways so the backward pass is an exact transpose.
struct InterpolationMap {
    int fragment_count = 0;
    int node_count = 0;
    // forward: per fragment, up to three (node, weight) pairs
    std::vector<int32_t> fwd_offsets;
    std::vector<int32_t> fwd_nodes;
    std::vector<double> fwd_weights;
    // transpose: per node, (fragment, weight) pairs in ascending fragment order
    std::vector<int32_t> bwd_offsets;
    std::vector<int32_t> bwd_fragments;
    std::vector<double> bwd_weights;
};

struct RasterPlan {
    std::vector<Fragment> fragments;
    SimplexTable simplices;
    InterpolationMap interp;
    std::vector<std::vector<int32_t>> neighborhoods; // M(i): per node, fragment ids
    int knn_k = 16;
};

struct PlanConfig {
    double curve_spacing = 2.0 / 256.0; // fragment spacing along curves
    double surface_density = 512.0;     // fragments per unit area
    int knn_k = 16;
    uint64_t seed = 0;                  // combined with the document digest
};

std::vector<Fragment> sample_curve_fragments(const hypergraph::Hypergraph& hg,
                                             const hypergraph::HEdge& edge, double spacing);

// Poisson-disk-like surface sampling by weighted sample elimination over the
// retained triangle mesh. `rng` advances deterministically.
std::vector<Fragment> sample_surface_fragments(const hypergraph::Hypergraph& hg,
                                               const hypergraph::HSurface& surface,
                                               const std::vector<Triangle>& triangles,
                                               double density, Rng& rng);

// Removes triangles whose param-space centroid falls outside the surface region.
std::vector<Triangle> clip_triangles(const hypergraph::HSurface& surface,
                                     const vgdoc::SurfaceSpec& spec,
                                     const std::vector<Triangle>& triangles);

void interpolate_forward(const InterpolationMap& map, const double* H, int channels, double* F);
void interpolate_backward(const InterpolationMap& map, const double* dF, int channels, double* dH);

// Exact k-nearest fragments per node; grid-accelerated, brute-force semantics
// (ties broken by lower fragment index).
std::vector<std::vector<int32_t>> knn_neighborhoods(const std::vector<Fragment>& fragments,
                                                    const std::vector<Vec>& node_positions, int k);

RasterPlan build_raster_plan(const hypergraph::Hypergraph& hg, const PlanConfig& config = {});

// ASCII PLY export; `colors` (one RGB triple per fragment) may be empty.
std::string to_ply(const std::vector<Fragment>& fragments,
                   const std::vector<std::array<uint8_t, 3>>& colors = {});

} // namespace rendnet::lsr
