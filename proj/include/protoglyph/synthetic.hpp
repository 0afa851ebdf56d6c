#pragma once

#include <cstdint>

#include "protoglyph/graph.hpp"

namespace protoglyph {

// Builds a dataset in the spirit of the triangle-counting benchmark: a graph
// of class i (1-indexed) contains exactly i triangles, realized as i disjoint
// 3-cliques plus tree-like padding where every padding edge attaches a brand
// new leaf node (a leaf cannot close a triangle, so the count is invariant by
// construction). Node counts are drawn uniformly from [3i, 3i+10].
//
// Deterministic for a given seed, independent of call order.
GraphDataset generate_triangles_dataset(int n_classes, int samples_per_class, std::uint64_t seed);

}  // namespace protoglyph
