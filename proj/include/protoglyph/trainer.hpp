#pragma once

#include <iosfwd>
#include <limits>

#include "protoglyph/model.hpp"

namespace protoglyph {

class TrainAbort : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrainerConfig {
  ModelConfig model;
  EpisodeSpec spec;
  double lr = 1e-4;
  int batch_episodes = 32;
  double lambda_mixup = 0.1;
  double lambda_reg = 0.1;
  int epochs_max = 500;
  int patience = 30;
  int train_episodes = 2000;
  int val_episodes = 500;
  std::uint64_t seed = 1;
  int workers = 1;
};

// Adam with bias correction. Moment shapes mirror the parameters they track.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(double lr, double beta1 = 0.9, double beta2 = 0.999,
                         double eps = 1e-8);

  // Applies one update using the gradients currently in the store.
  void step(ParameterStore& params);

  int steps_taken() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  int t_ = 0;
  std::map<std::string, Mat> m_, v_;
};

// Tracks the best validation accuracy; stops after `patience` epochs without
// strict improvement.
struct EarlyStopper {
  int patience = 30;
  double best = -std::numeric_limits<double>::infinity();
  int epochs_since_best = 0;

  // Returns true when `value` improves on the best seen so far.
  bool update(double value) {
    if (value > best) {
      best = value;
      epochs_since_best = 0;
      return true;
    }
    epochs_since_best++;
    return false;
  }
  bool should_stop() const { return epochs_since_best >= patience; }
};

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0, train_acc = 0, val_acc = 0, seconds = 0;
};

struct TrainResult {
  std::vector<EpochMetrics> history;
  ParameterStore best_params;
  double best_val_accuracy = 0;
  int best_epoch = 0;
  int epochs_run = 0;
};

// Assembled training loss for one staged episode (used directly by tests and
// the gradient checker; the training loop goes through the same path).
ForwardResult total_loss(ad::TapeD& tape, const ParameterStore& params,
                         const TrainerConfig& cfg, const StagedEpisode& ep, bool train_mode);

// Episodic training: batches of episodes, mean gradient per batch, one Adam
// step per batch, early stopping on validation accuracy. Per-epoch rows are
// appended to `metrics_csv` when given; the best parameters are written to
// `checkpoint_path` whenever validation improves.
TrainResult train_model(const GraphDataset& ds, const ClassSplit& split,
                        const TrainerConfig& cfg, std::ostream* log = nullptr,
                        const std::string& metrics_csv = {},
                        const std::string& checkpoint_path = {});

// Deterministic parallel map: fn(i) for i in [0, n), results independent of
// worker count and scheduling.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace protoglyph
