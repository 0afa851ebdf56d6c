#pragma once

#include <map>
#include <string>

#include "protoglyph/autodiff.hpp"
#include "protoglyph/types.hpp"

namespace protoglyph {

class ParameterError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every learnable tensor of the model, addressable by a stable name and
// paired with a gradient slot of identical shape. Iteration order is the
// lexicographic name order, which keeps reductions and optimizer sweeps
// deterministic.
class ParameterStore {
 public:
  Mat& create(const std::string& name, Index rows, Index cols);
  Mat& create(const std::string& name, Mat init);

  bool contains(const std::string& name) const { return slots_.count(name) > 0; }
  Mat& value(const std::string& name);
  const Mat& value(const std::string& name) const;
  Mat& grad(const std::string& name);
  const Mat& grad(const std::string& name) const;

  void zero_grads();
  void accumulate_grad(const std::string& name, const Mat& g);

  std::vector<std::string> names() const;
  std::size_t size() const { return slots_.size(); }

  template <class Fn>  // Fn(name, value, grad)
  void for_each(Fn&& fn) {
    for (auto& [name, slot] : slots_) fn(name, slot.value, slot.grad);
  }
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [name, slot] : slots_) fn(name, slot.value, slot.grad);
  }

  // Versioned JSON checkpoint: name -> shape -> values. Doubles survive the
  // round trip exactly.
  void save(const std::string& path) const;
  static ParameterStore load(const std::string& path);

 private:
  struct Slot {
    Mat value, grad;
  };
  std::map<std::string, Slot> slots_;
};

// Registers `store[name]` on the tape as a differentiable leaf.
inline ad::VarD use_parameter(ad::TapeD& tape, const ParameterStore& store,
                              const std::string& name) {
  return tape.leaf(store.value(name), true, name);
}

// Runs the adjoint sweep, adds dLoss/dParam into the store's gradient slots
// for every reachable parameter, then clears the tape.
inline void backward_into(ad::TapeD& tape, ad::VarD loss, ParameterStore& store) {
  tape.backward(loss, [&store](const std::string& name, const Mat& g) {
    store.accumulate_grad(name, g);
  });
  tape.clear();
}

}  // namespace protoglyph
