#include "protoglyph/episodes.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace protoglyph {

ValMode val_mode_from_string(const std::string& s) {
  if (s == "disjoint-classes") return ValMode::DisjointClasses;
  if (s == "base-subsample-20pct") return ValMode::BaseSubsample20;
  throw SplitError("unknown val_mode: " + s);
}

std::string to_string(ValMode m) {
  return m == ValMode::DisjointClasses ? "disjoint-classes" : "base-subsample-20pct";
}

const std::vector<int>& ClassSplit::classes_for(Phase p) const {
  switch (p) {
    case Phase::Train: return base;
    case Phase::Val: return val_mode == ValMode::DisjointClasses ? val : base;
    case Phase::Test: return novel;
  }
  return base;
}

const std::vector<std::vector<int>>& ClassSplit::pool_for(Phase p) const {
  switch (p) {
    case Phase::Train: return train_pool;
    case Phase::Val: return val_pool;
    case Phase::Test: return test_pool;
  }
  return train_pool;
}

namespace {

std::vector<int> to_contiguous_sorted(const GraphDataset& ds, const std::vector<int>& original) {
  std::vector<int> out;
  out.reserve(original.size());
  for (int o : original) out.push_back(ds.to_contiguous(o));
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw SplitError("duplicate class id within one partition");
  return out;
}

void check_capacity(const GraphDataset& ds, const std::vector<int>& classes,
                    const std::vector<std::vector<int>>& pool, const EpisodeSpec& spec,
                    const char* phase_name) {
  const int need = spec.k_shot + spec.n_query;
  for (int c : classes) {
    const auto& idx = pool[static_cast<std::size_t>(c)];
    if (static_cast<int>(idx.size()) < need)
      throw CapacityError(std::string(phase_name) + " class " +
                          std::to_string(ds.to_original(c)) + " has " +
                          std::to_string(idx.size()) + " samples but K+Q = " +
                          std::to_string(need) + " are required");
  }
}

}  // namespace

ClassSplit make_class_split(const GraphDataset& ds, const std::vector<int>& base_original,
                            const std::vector<int>& val_original,
                            const std::vector<int>& novel_original, ValMode val_mode,
                            std::uint64_t subsample_seed, const EpisodeSpec* spec) {
  ClassSplit split;
  split.val_mode = val_mode;
  split.base = to_contiguous_sorted(ds, base_original);
  split.val = to_contiguous_sorted(ds, val_original);
  split.novel = to_contiguous_sorted(ds, novel_original);

  if (split.base.empty()) throw SplitError("base partition must not be empty");
  if (split.novel.empty()) throw SplitError("novel partition must not be empty");
  if (val_mode == ValMode::BaseSubsample20 && !split.val.empty())
    throw SplitError("val classes must be empty under base-subsample-20pct");
  if (val_mode == ValMode::DisjointClasses) {
    std::set<int> seen;
    for (const auto* part : {&split.base, &split.val, &split.novel})
      for (int c : *part)
        if (!seen.insert(c).second)
          throw SplitError("class " + std::to_string(ds.to_original(c)) +
                           " appears in more than one partition");
  } else {
    std::set<int> base_set(split.base.begin(), split.base.end());
    for (int c : split.novel)
      if (base_set.count(c))
        throw SplitError("class " + std::to_string(ds.to_original(c)) +
                         " appears in both base and novel partitions");
  }

  const auto by_class = ds.indices_by_class();
  const std::size_t n_cls = by_class.size();
  split.train_pool.assign(n_cls, {});
  split.val_pool.assign(n_cls, {});
  split.test_pool.assign(n_cls, {});

  for (int c : split.novel) split.test_pool[static_cast<std::size_t>(c)] = by_class[static_cast<std::size_t>(c)];

  if (val_mode == ValMode::DisjointClasses) {
    for (int c : split.base) split.train_pool[static_cast<std::size_t>(c)] = by_class[static_cast<std::size_t>(c)];
    for (int c : split.val) split.val_pool[static_cast<std::size_t>(c)] = by_class[static_cast<std::size_t>(c)];
  } else {
    // Stratified 20% per base class, fixed here once; training keeps the rest.
    for (int c : split.base) {
      const auto& idx = by_class[static_cast<std::size_t>(c)];
      const Index n = static_cast<Index>(idx.size());
      Index n_val = (n * 2 + 5) / 10;  // round(0.2 * n)
      if (n_val < 1) n_val = 1;
      if (n_val >= n) n_val = n - 1;
      RngStream rng = RngStream::keyed({rng_tag::subsample, subsample_seed,
                                        static_cast<std::uint64_t>(c)});
      auto chosen = rng.sample_without_replacement(n, n_val);
      std::vector<char> is_val(idx.size(), 0);
      for (Index i : chosen) is_val[static_cast<std::size_t>(i)] = 1;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        auto& dst = is_val[i] ? split.val_pool : split.train_pool;
        dst[static_cast<std::size_t>(c)].push_back(idx[i]);
      }
    }
  }

  if (spec) {
    check_capacity(ds, split.classes_for(Phase::Train), split.train_pool, *spec, "train");
    check_capacity(ds, split.classes_for(Phase::Val), split.val_pool, *spec, "val");
    check_capacity(ds, split.classes_for(Phase::Test), split.test_pool, *spec, "test");
  }
  return split;
}

Episode sample_episode(const std::vector<int>& classes,
                       const std::vector<std::vector<int>>& pool, const EpisodeSpec& spec,
                       RngStream& rng) {
  if (spec.n_way < 2 || spec.k_shot < 1 || spec.n_query < 1)
    throw SplitError("episode spec requires N >= 2, K >= 1, Q >= 1");
  std::vector<int> eligible;
  for (int c : classes)
    if (static_cast<int>(pool[static_cast<std::size_t>(c)].size()) >= spec.k_shot + spec.n_query)
      eligible.push_back(c);
  if (static_cast<int>(eligible.size()) < spec.n_way)
    throw CapacityError("episode needs " + std::to_string(spec.n_way) + " classes with at least " +
                        std::to_string(spec.k_shot + spec.n_query) + " samples; only " +
                        std::to_string(eligible.size()) + " available");

  Episode ep;
  const auto class_picks =
      rng.sample_without_replacement(static_cast<Index>(eligible.size()), spec.n_way);
  for (Index p : class_picks) ep.classes.push_back(eligible[static_cast<std::size_t>(p)]);

  for (int n = 0; n < spec.n_way; ++n) {
    const auto& idx = pool[static_cast<std::size_t>(ep.classes[static_cast<std::size_t>(n)])];
    const auto picks = rng.sample_without_replacement(static_cast<Index>(idx.size()),
                                                      spec.k_shot + spec.n_query);
    for (int k = 0; k < spec.k_shot; ++k)
      ep.supports.push_back(idx[static_cast<std::size_t>(picks[static_cast<std::size_t>(k)])]);
    for (int q = 0; q < spec.n_query; ++q) {
      ep.queries.push_back(
          idx[static_cast<std::size_t>(picks[static_cast<std::size_t>(spec.k_shot + q)])]);
      ep.query_labels.push_back(n);
    }
  }
  return ep;
}

std::uint64_t episode_key(std::uint64_t seed, Phase phase, int epoch, int index) {
  const std::uint64_t tag = phase == Phase::Train  ? rng_tag::train
                            : phase == Phase::Val ? rng_tag::val
                                                  : rng_tag::test;
  std::uint64_t k = combine_keys(seed, tag);
  k = combine_keys(k, static_cast<std::uint64_t>(epoch));
  k = combine_keys(k, static_cast<std::uint64_t>(index));
  return k;
}

std::vector<Episode> episode_stream(const ClassSplit& split, Phase phase,
                                    const EpisodeSpec& spec, int epoch, int count_override) {
  int count = count_override;
  if (count < 0) count = phase == Phase::Train ? 2000 : phase == Phase::Val ? 500 : 1;
  const auto& classes = split.classes_for(phase);
  const auto& pool = split.pool_for(phase);
  if (classes.empty()) throw SplitError("phase partition is empty");

  std::vector<Episode> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const std::uint64_t key = episode_key(spec.seed, phase, epoch, i);
    RngStream rng(key);
    Episode ep = sample_episode(classes, pool, spec, rng);
    ep.rng_key = key;
    out.push_back(std::move(ep));
  }
  return out;
}

std::string episodes_to_jsonl(const GraphDataset& ds, const std::vector<Episode>& episodes) {
  std::ostringstream os;
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    const Episode& ep = episodes[i];
    os << "{\"episode\":" << i << ",\"classes\":[";
    for (std::size_t n = 0; n < ep.classes.size(); ++n)
      os << (n ? "," : "") << ds.to_original(ep.classes[n]);
    os << "],\"supports\":[";
    for (std::size_t k = 0; k < ep.supports.size(); ++k) os << (k ? "," : "") << ep.supports[k];
    os << "],\"queries\":[";
    for (std::size_t q = 0; q < ep.queries.size(); ++q) os << (q ? "," : "") << ep.queries[q];
    os << "]}\n";
  }
  return os.str();
}

}  // namespace protoglyph
