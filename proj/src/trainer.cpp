#include "protoglyph/trainer.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>

namespace protoglyph {

AdamOptimizer::AdamOptimizer(double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void AdamOptimizer::step(ParameterStore& params) {
  t_++;
  const double bc1 = 1.0 - std::pow(beta1_, t_);
  const double bc2 = 1.0 - std::pow(beta2_, t_);
  params.for_each([&](const std::string& name, Mat& value, Mat& grad) {
    Mat& m = m_.try_emplace(name, Mat::Zero(value.rows(), value.cols())).first->second;
    Mat& v = v_.try_emplace(name, Mat::Zero(value.rows(), value.cols())).first->second;
    m = beta1_ * m + (1.0 - beta1_) * grad;
    v = beta2_ * v + (1.0 - beta2_) * grad.cwiseProduct(grad);
    value.array() -= lr_ * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps_);
  });
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::thread> threads;
  const int count = std::min(workers, n);
  threads.reserve(static_cast<std::size_t>(count));
  for (int w = 0; w < count; ++w) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
}

ForwardResult total_loss(ad::TapeD& tape, const ParameterStore& params, const TrainerConfig& cfg,
                         const StagedEpisode& ep, bool train_mode) {
  return episode_loss(tape, params, cfg.model, cfg.lambda_mixup, cfg.lambda_reg, ep, train_mode);
}

namespace {

struct EpisodeOutcome {
  double loss = 0, acc = 0;
  ParameterStore grads;
  std::string fault;
};

std::string episode_tag(Phase phase, int epoch, int index) {
  const char* p = phase == Phase::Train ? "train" : phase == Phase::Val ? "val" : "test";
  return std::string("phase=") + p + " epoch=" + std::to_string(epoch) +
         " episode=" + std::to_string(index);
}

}  // namespace

TrainResult train_model(const GraphDataset& ds, const ClassSplit& split, const TrainerConfig& cfg,
                        std::ostream* log, const std::string& metrics_csv,
                        const std::string& checkpoint_path) {
  ParameterStore params = init_model_params(cfg.model, cfg.seed);
  AdamOptimizer adam(cfg.lr);
  EarlyStopper stopper{cfg.patience};

  TrainResult result;
  std::ofstream csv;
  if (!metrics_csv.empty()) {
    csv.open(metrics_csv);
    csv << "epoch,train_loss,train_acc,val_acc,seconds\n";
  }

  for (int epoch = 1; epoch <= cfg.epochs_max; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto episodes = episode_stream(split, Phase::Train, cfg.spec, epoch, cfg.train_episodes);

    double loss_sum = 0, acc_sum = 0;
    for (std::size_t b0 = 0; b0 < episodes.size(); b0 += static_cast<std::size_t>(cfg.batch_episodes)) {
      const int batch_n =
          static_cast<int>(std::min(episodes.size() - b0, static_cast<std::size_t>(cfg.batch_episodes)));
      std::vector<EpisodeOutcome> outcomes(static_cast<std::size_t>(batch_n));

      parallel_for(batch_n, cfg.workers, [&](int i) {
        EpisodeOutcome& out = outcomes[static_cast<std::size_t>(i)];
        const Episode& ep = episodes[b0 + static_cast<std::size_t>(i)];
        try {
          StagedEpisode staged = stage_episode(ds, ep, cfg.spec);
          ad::TapeD tape;
          ForwardResult fwd = total_loss(tape, params, cfg, staged, /*train_mode=*/true);
          out.loss = fwd.loss_value;
          out.acc = fwd.accuracy;
          out.grads = params;  // same shapes, fresh gradient slots
          out.grads.zero_grads();
          backward_into(tape, fwd.loss, out.grads);
        } catch (const ad::NumericFault& e) {
          out.fault = e.what();
        }
      });

      params.zero_grads();
      const double inv = 1.0 / static_cast<double>(batch_n);
      for (int i = 0; i < batch_n; ++i) {
        EpisodeOutcome& out = outcomes[static_cast<std::size_t>(i)];
        if (!out.fault.empty())
          throw TrainAbort("numeric fault in " +
                           episode_tag(Phase::Train, epoch, static_cast<int>(b0) + i) + ": " +
                           out.fault);
        loss_sum += out.loss;
        acc_sum += out.acc;
        out.grads.for_each([&](const std::string& name, Mat&, Mat& g) {
          params.grad(name) += inv * g;
        });
      }
      adam.step(params);
    }

    const auto val_episodes = episode_stream(split, Phase::Val, cfg.spec, epoch, cfg.val_episodes);
    std::vector<double> val_accs(val_episodes.size(), 0.0);
    std::vector<std::string> val_faults(val_episodes.size());
    parallel_for(static_cast<int>(val_episodes.size()), cfg.workers, [&](int i) {
      try {
        StagedEpisode staged = stage_episode(ds, val_episodes[static_cast<std::size_t>(i)], cfg.spec);
        val_accs[static_cast<std::size_t>(i)] = episode_eval(params, cfg.model, staged).accuracy;
      } catch (const ad::NumericFault& e) {
        val_faults[static_cast<std::size_t>(i)] = e.what();
      }
    });
    for (std::size_t i = 0; i < val_faults.size(); ++i)
      if (!val_faults[i].empty())
        throw TrainAbort("numeric fault in " + episode_tag(Phase::Val, epoch, static_cast<int>(i)) +
                         ": " + val_faults[i]);
    double val_acc = 0;
    for (double a : val_accs) val_acc += a;
    val_acc /= static_cast<double>(val_accs.empty() ? 1 : val_accs.size());

    EpochMetrics row;
    row.epoch = epoch;
    row.train_loss = loss_sum / static_cast<double>(episodes.size());
    row.train_acc = acc_sum / static_cast<double>(episodes.size());
    row.val_acc = val_acc;
    row.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.history.push_back(row);
    result.epochs_run = epoch;

    if (csv.is_open()) {
      csv << row.epoch << "," << row.train_loss << "," << row.train_acc << "," << row.val_acc
          << "," << row.seconds << "\n";
      csv.flush();
    }
    if (log) {
      (*log) << "epoch " << row.epoch << ": train_loss " << row.train_loss << " train_acc "
             << row.train_acc << " val_acc " << row.val_acc << " (" << row.seconds << "s)\n";
    }

    if (stopper.update(val_acc)) {
      result.best_params = params;
      result.best_val_accuracy = val_acc;
      result.best_epoch = epoch;
      if (!checkpoint_path.empty()) params.save(checkpoint_path);
    }
    if (stopper.should_stop()) break;
  }
  return result;
}

}  // namespace protoglyph
