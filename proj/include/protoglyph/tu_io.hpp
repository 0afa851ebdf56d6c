#pragma once

#include <string>

#include "protoglyph/graph.hpp"

namespace protoglyph {

class FormatError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads the standard multi-file text layout used by graph classification
// benchmarks: `<name>_A.txt` (comma separated edge pairs, 1-indexed global
// node ids), `<name>_graph_indicator.txt` (graph id per node, one per line),
// `<name>_graph_labels.txt` (one label per graph), plus optional
// `<name>_node_labels.txt` and `<name>_node_attributes.txt`.
//
// Node ids come back 0-indexed per graph and labels are remapped to a
// contiguous 0..C-1 range preserving sorted original order; the original
// labels stay available through GraphDataset::to_original.
GraphDataset load_tu_dataset(const std::string& root_path, const std::string& name);

// Inverse of the loader, writing original labels and any raw node
// labels/attributes. Output is deterministic for a given dataset.
void write_tu_dataset(const GraphDataset& ds, const std::string& root_path,
                      const std::string& name);

}  // namespace protoglyph
