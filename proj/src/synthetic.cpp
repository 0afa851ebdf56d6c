#include "protoglyph/synthetic.hpp"

#include "protoglyph/rng.hpp"

namespace protoglyph {

GraphDataset generate_triangles_dataset(int n_classes, int samples_per_class,
                                        std::uint64_t seed) {
  if (n_classes < 1 || n_classes > 10)
    throw DatasetError("generate_triangles_dataset: n_classes must be in [1, 10]");
  if (samples_per_class < 1)
    throw DatasetError("generate_triangles_dataset: samples_per_class must be >= 1");

  GraphDataset ds;
  ds.name = "synthetic-triangles";
  std::vector<int> raw_labels;
  for (int cls = 1; cls <= n_classes; ++cls) {
    for (int s = 0; s < samples_per_class; ++s) {
      RngStream rng = RngStream::keyed({rng_tag::dataset, seed,
                                        static_cast<std::uint64_t>(cls),
                                        static_cast<std::uint64_t>(s)});
      Graph g;
      const int core = 3 * cls;
      for (int t = 0; t < cls; ++t) {
        const int b = 3 * t;
        g.edges.push_back({b, b + 1});
        g.edges.push_back({b, b + 2});
        g.edges.push_back({b + 1, b + 2});
      }
      const int padding = static_cast<int>(rng.below(11));
      g.node_count = core;
      for (int p = 0; p < padding; ++p) {
        const int parent = static_cast<int>(rng.below(g.node_count));
        const int fresh = static_cast<int>(g.node_count);
        g.edges.push_back({parent, fresh});
        g.node_count++;
      }
      normalize_edges(g);
      ds.graphs.push_back(std::move(g));
      raw_labels.push_back(cls);
    }
  }
  assign_contiguous_labels(ds, raw_labels);
  return ds;
}

}  // namespace protoglyph
