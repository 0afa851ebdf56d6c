#include "protoglyph/params.hpp"

#include <fstream>

#include <json.hpp>

namespace protoglyph {

Mat& ParameterStore::create(const std::string& name, Index rows, Index cols) {
  return create(name, Mat::Zero(rows, cols));
}

Mat& ParameterStore::create(const std::string& name, Mat init) {
  if (slots_.count(name)) throw ParameterError("parameter already exists: " + name);
  Slot slot;
  slot.grad = Mat::Zero(init.rows(), init.cols());
  slot.value = std::move(init);
  auto [it, ok] = slots_.emplace(name, std::move(slot));
  (void)ok;
  return it->second.value;
}

Mat& ParameterStore::value(const std::string& name) {
  auto it = slots_.find(name);
  if (it == slots_.end()) throw ParameterError("unknown parameter: " + name);
  return it->second.value;
}

const Mat& ParameterStore::value(const std::string& name) const {
  auto it = slots_.find(name);
  if (it == slots_.end()) throw ParameterError("unknown parameter: " + name);
  return it->second.value;
}

Mat& ParameterStore::grad(const std::string& name) {
  auto it = slots_.find(name);
  if (it == slots_.end()) throw ParameterError("unknown parameter: " + name);
  return it->second.grad;
}

const Mat& ParameterStore::grad(const std::string& name) const {
  auto it = slots_.find(name);
  if (it == slots_.end()) throw ParameterError("unknown parameter: " + name);
  return it->second.grad;
}

void ParameterStore::zero_grads() {
  for (auto& [name, slot] : slots_) slot.grad.setZero();
}

void ParameterStore::accumulate_grad(const std::string& name, const Mat& g) {
  Mat& dst = grad(name);
  if (dst.rows() != g.rows() || dst.cols() != g.cols())
    throw ParameterError("gradient shape mismatch for " + name);
  dst += g;
}

std::vector<std::string> ParameterStore::names() const {
  std::vector<std::string> out;
  out.reserve(slots_.size());
  for (const auto& [name, slot] : slots_) out.push_back(name);
  return out;
}

void ParameterStore::save(const std::string& path) const {
  nlohmann::json j;
  j["format"] = "protoglyph.params";
  j["version"] = 1;
  nlohmann::json tensors = nlohmann::json::object();
  for (const auto& [name, slot] : slots_) {
    nlohmann::json t;
    t["rows"] = slot.value.rows();
    t["cols"] = slot.value.cols();
    std::vector<double> data(slot.value.data(),
                             slot.value.data() + slot.value.size());
    t["data"] = std::move(data);
    tensors[name] = std::move(t);
  }
  j["tensors"] = std::move(tensors);
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write checkpoint: " + path);
  out << j.dump();
}

ParameterStore ParameterStore::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read checkpoint: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParameterError("malformed checkpoint " + path + ": " + e.what());
  }
  if (j.value("format", "") != "protoglyph.params")
    throw ParameterError("not a parameter checkpoint: " + path);
  if (j.value("version", 0) != 1)
    throw ParameterError("unsupported checkpoint version in " + path);
  ParameterStore store;
  for (const auto& [name, t] : j.at("tensors").items()) {
    const Index rows = t.at("rows").get<Index>();
    const Index cols = t.at("cols").get<Index>();
    const auto data = t.at("data").get<std::vector<double>>();
    if (static_cast<Index>(data.size()) != rows * cols)
      throw ParameterError("tensor size mismatch for " + name + " in " + path);
    Mat m(rows, cols);
    std::copy(data.begin(), data.end(), m.data());
    store.create(name, std::move(m));
  }
  return store;
}

}  // namespace protoglyph
