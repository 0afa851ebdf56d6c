#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "protoglyph/graph.hpp"
#include "protoglyph/rng.hpp"

namespace protoglyph {

class SplitError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class CapacityError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ValMode { DisjointClasses, BaseSubsample20 };

ValMode val_mode_from_string(const std::string& s);
std::string to_string(ValMode m);

enum class Phase { Train, Val, Test };

// Partition of the dataset's classes into base / validation / novel, with the
// sample pools each phase may draw from. Under BaseSubsample20 the validation
// pool is a per-class stratified 20% of the base samples, fixed once at split
// time, and the train pool is the remaining 80%.
struct ClassSplit {
  std::vector<int> base, val, novel;  // contiguous class ids
  ValMode val_mode = ValMode::DisjointClasses;

  // Dataset indices per contiguous class id; empty vectors for classes not in
  // the respective partition.
  std::vector<std::vector<int>> train_pool;
  std::vector<std::vector<int>> val_pool;
  std::vector<std::vector<int>> test_pool;

  const std::vector<int>& classes_for(Phase p) const;
  const std::vector<std::vector<int>>& pool_for(Phase p) const;
};

struct EpisodeSpec {
  int n_way = 2;
  int k_shot = 5;
  int n_query = 15;
  std::uint64_t seed = 0;
};

// A single N-way K-shot task. `supports` and `queries` hold dataset indices
// grouped class-major: supports[n*K + k], queries[n*Q + q]. Query labels are
// episode-local indices into `classes`.
struct Episode {
  std::vector<int> classes;
  std::vector<int> supports;
  std::vector<int> queries;
  std::vector<int> query_labels;
  std::uint64_t rng_key = 0;  // stream key the episode was drawn with
};

// Validates the partition lists (given as original class ids) and freezes the
// subsample pools. When `spec` is non-null every phase pool is checked to hold
// at least K+Q samples per class.
ClassSplit make_class_split(const GraphDataset& ds, const std::vector<int>& base_original,
                            const std::vector<int>& val_original,
                            const std::vector<int>& novel_original, ValMode val_mode,
                            std::uint64_t subsample_seed = 0,
                            const EpisodeSpec* spec = nullptr);

// Draws N distinct classes uniformly, then K+Q distinct samples per class
// (first K become supports). Throws CapacityError when the pool cannot
// satisfy the spec.
Episode sample_episode(const std::vector<int>& classes,
                       const std::vector<std::vector<int>>& pool, const EpisodeSpec& spec,
                       RngStream& rng);

// The episode sequence for one epoch of a phase. Counts default to the
// training protocol (2000 train / 500 val / 1 test) unless overridden.
// Streams are keyed by (seed, phase, epoch, index), so regeneration of any
// index is independent of every other.
std::vector<Episode> episode_stream(const ClassSplit& split, Phase phase,
                                    const EpisodeSpec& spec, int epoch,
                                    int count_override = -1);

std::uint64_t episode_key(std::uint64_t seed, Phase phase, int epoch, int index);

// One JSON object per line: episode id, original class ids, support and query
// dataset indices. Used by the `make-episodes` command and fixture tests.
std::string episodes_to_jsonl(const GraphDataset& ds, const std::vector<Episode>& episodes);

}  // namespace protoglyph
