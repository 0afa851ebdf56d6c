#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "protoglyph/types.hpp"

namespace protoglyph::ad {

class DimensionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class NumericFault : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class ContractError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class Scalar>
class Tape;

// Lightweight handle into a tape; cheap to copy, invalidated by Tape::clear.
template <class Scalar>
struct Var {
  Tape<Scalar>* tape = nullptr;
  std::int32_t id = -1;

  bool valid() const { return tape != nullptr && id >= 0; }
  const DenseMatrix<Scalar>& value() const;
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }
};

// Reverse-mode tape over dense row-major matrices. Every op records enough to
// replay adjoints; backward() walks the record once in reverse. Each forward
// result is checked for NaN/Inf and faults immediately.
template <class Scalar>
class Tape {
 public:
  using M = DenseMatrix<Scalar>;
  using V = Var<Scalar>;
  using RowArr = Eigen::Array<Scalar, 1, Eigen::Dynamic>;
  using ColArr = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  // ---- node construction ---------------------------------------------------

  V constant(M m) { return push(Op::Leaf, {}, std::move(m), false); }

  V scalar(Scalar v) {
    M m(1, 1);
    m(0, 0) = v;
    return constant(std::move(m));
  }

  V leaf(M m, bool requires_grad = true, std::string name = {}) {
    V out = push(Op::Leaf, {}, std::move(m), requires_grad);
    nodes_[static_cast<std::size_t>(out.id)].name = std::move(name);
    return out;
  }

  // ---- primitives ----------------------------------------------------------

  V matmul(V a, V b) {
    require(a.value().cols() == b.value().rows(), "matmul", a, b);
    M out(a.rows(), b.cols());
    out.noalias() = a.value() * b.value();
    return push(Op::MatMul, {a.id, b.id}, std::move(out));
  }

  V transpose(V a) { return push(Op::Transpose, {a.id}, a.value().transpose()); }

  V add(V a, V b) {
    require_same(a, b, "add");
    return push(Op::Add, {a.id, b.id}, a.value() + b.value());
  }

  V sub(V a, V b) {
    require_same(a, b, "sub");
    return push(Op::Sub, {a.id, b.id}, a.value() - b.value());
  }

  V cwise_mul(V a, V b) {
    require_same(a, b, "cwise_mul");
    return push(Op::CwiseMul, {a.id, b.id}, a.value().cwiseProduct(b.value()));
  }

  V scale(V a, Scalar c) {
    V out = push(Op::ScaleConst, {a.id}, (a.value().array() * c).matrix());
    aux(out) = c;
    return out;
  }

  V shift(V a, Scalar c) {
    V out = push(Op::ShiftConst, {a.id}, (a.value().array() + c).matrix());
    aux(out) = c;
    return out;
  }

  // z = s * A with s a 1x1 var broadcast over every entry.
  V broadcast_scale(V a, V s) {
    require(s.rows() == 1 && s.cols() == 1, "broadcast_scale: scale must be 1x1", s, s);
    return push(Op::MulScalarVar, {a.id, s.id}, (a.value().array() * s.value()(0, 0)).matrix());
  }

  V add_row_vector(V a, V r) {
    require(r.rows() == 1 && r.cols() == a.cols(), "add_row_vector", a, r);
    return push(Op::AddRowVec, {a.id, r.id},
                (a.value().array().rowwise() + RowArr(r.value().row(0).array())).matrix());
  }

  V mul_row_vector(V a, V r) {
    require(r.rows() == 1 && r.cols() == a.cols(), "mul_row_vector", a, r);
    return push(Op::MulRowVec, {a.id, r.id},
                (a.value().array().rowwise() * RowArr(r.value().row(0).array())).matrix());
  }

  V add_col_vector(V a, V c) {
    require(c.cols() == 1 && c.rows() == a.rows(), "add_col_vector", a, c);
    return push(Op::AddColVec, {a.id, c.id},
                (a.value().array().colwise() + ColArr(c.value().col(0).array())).matrix());
  }

  V relu(V a) { return push(Op::Relu, {a.id}, a.value().cwiseMax(Scalar(0))); }

  V log(V a) { return push(Op::Log, {a.id}, a.value().array().log().matrix()); }

  V square(V a) { return push(Op::Square, {a.id}, a.value().array().square().matrix()); }

  V exp(V a) { return push(Op::Exp, {a.id}, a.value().array().exp().matrix()); }

  V sqrt_shifted(V a, Scalar eps) {
    V out = push(Op::SqrtShift, {a.id}, (a.value().array() + eps).sqrt().matrix());
    aux(out) = eps;
    return out;
  }

  V rsqrt_shifted(V a, Scalar eps) {
    V out = push(Op::RsqrtShift, {a.id}, (a.value().array() + eps).rsqrt().matrix());
    aux(out) = eps;
    return out;
  }

  V concat_cols(const std::vector<V>& parts) {
    if (parts.empty()) throw ContractError("concat_cols: no inputs");
    Index cols = 0;
    for (const V& p : parts) {
      if (p.rows() != parts.front().rows())
        throw DimensionError("concat_cols: row mismatch");
      cols += p.cols();
    }
    M out(parts.front().rows(), cols);
    Index at = 0;
    std::vector<std::int32_t> ids;
    for (const V& p : parts) {
      out.middleCols(at, p.cols()) = p.value();
      at += p.cols();
      ids.push_back(p.id);
    }
    V v = push(Op::ConcatCols, {}, std::move(out));
    adopt_children(v, std::move(ids));
    return v;
  }

  V concat_rows(const std::vector<V>& parts) {
    if (parts.empty()) throw ContractError("concat_rows: no inputs");
    Index rows = 0;
    for (const V& p : parts) {
      if (p.cols() != parts.front().cols())
        throw DimensionError("concat_rows: column mismatch");
      rows += p.rows();
    }
    M out(rows, parts.front().cols());
    Index at = 0;
    std::vector<std::int32_t> ids;
    for (const V& p : parts) {
      out.middleRows(at, p.rows()) = p.value();
      at += p.rows();
      ids.push_back(p.id);
    }
    V v = push(Op::ConcatRows, {}, std::move(out));
    adopt_children(v, std::move(ids));
    return v;
  }

  V select_rows(V a, std::vector<Index> rows) {
    M out(static_cast<Index>(rows.size()), a.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i] < 0 || rows[i] >= a.rows())
        throw DimensionError("select_rows: index " + std::to_string(rows[i]) + " out of range");
      out.row(static_cast<Index>(i)) = a.value().row(rows[i]);
    }
    V v = push(Op::RowSelect, {a.id}, std::move(out));
    nodes_[static_cast<std::size_t>(v.id)].indices = std::move(rows);
    return v;
  }

  V sum_all(V a) {
    M out(1, 1);
    out(0, 0) = a.value().sum();
    return push(Op::SumAll, {a.id}, std::move(out));
  }

  V row_sums(V a) { return push(Op::RowSums, {a.id}, a.value().rowwise().sum()); }

  V col_sums(V a) { return push(Op::ColSums, {a.id}, a.value().colwise().sum()); }

  V col_means(V a) { return push(Op::ColMeans, {a.id}, a.value().colwise().mean()); }

  // Population standard deviation of each column, floored by eps inside the
  // square root.
  V col_stds(V a, Scalar eps) {
    const M& x = a.value();
    M mu = x.colwise().mean();
    M out = (((x.rowwise() - mu.row(0)).array().square().colwise().sum() /
              static_cast<Scalar>(x.rows())) +
             eps)
                .sqrt()
                .matrix();
    V v = push(Op::ColStds, {a.id}, std::move(out));
    aux(v) = eps;
    return v;
  }

  V softmax_rows(V a) {
    M out = a.value();
    for (Index i = 0; i < out.rows(); ++i) {
      const Scalar m = out.row(i).maxCoeff();
      out.row(i) = (out.row(i).array() - m).exp();
      out.row(i) /= out.row(i).sum();
    }
    return push(Op::SoftmaxRows, {a.id}, std::move(out));
  }

  V log_softmax_rows(V a) {
    M out = a.value();
    for (Index i = 0; i < out.rows(); ++i) {
      const Scalar m = out.row(i).maxCoeff();
      const Scalar lse = std::log((out.row(i).array() - m).exp().sum()) + m;
      out.row(i) = out.row(i).array() - lse;
    }
    return push(Op::LogSoftmaxRows, {a.id}, std::move(out));
  }

  // out.row(dst) += a.row(src) for every directed edge (src, dst). Undirected
  // graphs list both directions; equals a dense adjacency multiply.
  V neighbor_sum(V a, std::vector<std::array<Index, 2>> edges) {
    M out = M::Zero(a.rows(), a.cols());
    for (const auto& e : edges) {
      if (e[0] < 0 || e[1] < 0 || e[0] >= a.rows() || e[1] >= a.rows())
        throw DimensionError("neighbor_sum: edge endpoint out of range");
      out.row(e[1]) += a.value().row(e[0]);
    }
    V v = push(Op::NeighborSum, {a.id}, std::move(out));
    nodes_[static_cast<std::size_t>(v.id)].edges = std::move(edges);
    return v;
  }

  // ---- gradients -----------------------------------------------------------

  // Accumulates dLoss/dLeaf for every reachable leaf. Named leaves that
  // require gradients are also reported through `sink`. Gradients stay
  // readable via grad() until the next clear().
  void backward(V loss,
                const std::function<void(const std::string&, const M&)>& sink = nullptr) {
    if (loss.tape != this || !loss.valid())
      throw ContractError("backward: loss is not on this tape");
    if (loss.rows() != 1 || loss.cols() != 1)
      throw ContractError("backward: loss must be a 1x1 scalar");

    for (auto& n : nodes_) n.grad.resize(0, 0);
    auto& ln = nodes_[static_cast<std::size_t>(loss.id)];
    ln.grad = M::Ones(1, 1);

    for (std::int32_t i = loss.id; i >= 0; --i) {
      Node& n = nodes_[static_cast<std::size_t>(i)];
      if (n.grad.size() == 0 || !n.requires_grad) continue;
      propagate(n);
    }
    if (sink) {
      for (const Node& n : nodes_) {
        if (n.op == Op::Leaf && n.requires_grad && !n.name.empty() && n.grad.size() != 0)
          sink(n.name, n.grad);
      }
    }
  }

  const M& grad(V v) const {
    const Node& n = nodes_.at(static_cast<std::size_t>(v.id));
    if (n.grad.size() == 0) {
      static const M zero = M();
      return zero;
    }
    return n.grad;
  }

  const M& value_of(std::int32_t id) const { return nodes_.at(static_cast<std::size_t>(id)).value; }

  // Order-sensitive fingerprint of all relu input signs; two forward passes
  // with the same control flow produce equal signatures iff no relu argument
  // changed side of the kink.
  std::uint64_t activation_signature() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (const Node& n : nodes_) {
      if (n.op != Op::Relu) continue;
      const M& x = nodes_[static_cast<std::size_t>(n.in[0])].value;
      for (Index i = 0; i < x.rows(); ++i)
        for (Index j = 0; j < x.cols(); ++j) {
          h ^= static_cast<std::uint64_t>(x(i, j) > Scalar(0));
          h *= 1099511628211ULL;
        }
    }
    return h;
  }

  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

 private:
  enum class Op {
    Leaf, MatMul, Transpose, Add, Sub, CwiseMul, ScaleConst, ShiftConst, MulScalarVar,
    AddRowVec, MulRowVec, AddColVec, Relu, Log, Square, Exp, SqrtShift, RsqrtShift,
    ConcatCols, ConcatRows, RowSelect, SumAll, RowSums, ColSums, ColMeans, ColStds,
    SoftmaxRows, LogSoftmaxRows, NeighborSum,
  };

  struct Node {
    Op op = Op::Leaf;
    std::array<std::int32_t, 2> in{-1, -1};
    std::vector<std::int32_t> many;
    std::vector<Index> indices;
    std::vector<std::array<Index, 2>> edges;
    M value, grad;
    Scalar c = 0;
    bool requires_grad = false;
    std::string name;
  };

  Scalar& aux(V v) { return nodes_[static_cast<std::size_t>(v.id)].c; }

  void adopt_children(V v, std::vector<std::int32_t> ids) {
    Node& n = nodes_[static_cast<std::size_t>(v.id)];
    n.many = std::move(ids);
    for (std::int32_t cid : n.many)
      if (wants_grad(cid)) n.requires_grad = true;
  }

  V push(Op op, std::array<std::int32_t, 2> in, M value, bool leaf_requires = false) {
    if (!value.allFinite())
      throw NumericFault("non-finite values produced by " + op_name(op));
    Node n;
    n.op = op;
    n.in = in;
    n.value = std::move(value);
    if (op == Op::Leaf) {
      n.requires_grad = leaf_requires;
    } else {
      for (std::int32_t i : in)
        if (i >= 0 && nodes_[static_cast<std::size_t>(i)].requires_grad) n.requires_grad = true;
    }
    nodes_.push_back(std::move(n));
    return V{this, static_cast<std::int32_t>(nodes_.size()) - 1};
  }

  static std::string op_name(Op op) {
    switch (op) {
      case Op::Leaf: return "leaf";
      case Op::MatMul: return "matmul";
      case Op::Transpose: return "transpose";
      case Op::Add: return "add";
      case Op::Sub: return "sub";
      case Op::CwiseMul: return "cwise_mul";
      case Op::ScaleConst: return "scale";
      case Op::ShiftConst: return "shift";
      case Op::MulScalarVar: return "broadcast_scale";
      case Op::AddRowVec: return "add_row_vector";
      case Op::MulRowVec: return "mul_row_vector";
      case Op::AddColVec: return "add_col_vector";
      case Op::Relu: return "relu";
      case Op::Log: return "log";
      case Op::Square: return "square";
      case Op::Exp: return "exp";
      case Op::SqrtShift: return "sqrt_shifted";
      case Op::RsqrtShift: return "rsqrt_shifted";
      case Op::ConcatCols: return "concat_cols";
      case Op::ConcatRows: return "concat_rows";
      case Op::RowSelect: return "select_rows";
      case Op::SumAll: return "sum_all";
      case Op::RowSums: return "row_sums";
      case Op::ColSums: return "col_sums";
      case Op::ColMeans: return "col_means";
      case Op::ColStds: return "col_stds";
      case Op::SoftmaxRows: return "softmax_rows";
      case Op::LogSoftmaxRows: return "log_softmax_rows";
      case Op::NeighborSum: return "neighbor_sum";
    }
    return "?";
  }

  static std::string shape_str(const M& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
  }

  void require(bool ok, const std::string& what, V a, V b) const {
    if (!ok)
      throw DimensionError(what + ": incompatible shapes " + shape_str(a.value()) + " and " +
                           shape_str(b.value()));
  }

  void require_same(V a, V b, const std::string& what) const {
    require(a.rows() == b.rows() && a.cols() == b.cols(), what, a, b);
  }

  M& grad_buf(std::int32_t id) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.grad.size() == 0) n.grad = M::Zero(n.value.rows(), n.value.cols());
    return n.grad;
  }

  bool wants_grad(std::int32_t id) const {
    return id >= 0 && nodes_[static_cast<std::size_t>(id)].requires_grad;
  }

  const M& in_val(const Node& n, int slot) const {
    return nodes_[static_cast<std::size_t>(n.in[static_cast<std::size_t>(slot)])].value;
  }

  void propagate(Node& n) {
    const M& g = n.grad;
    switch (n.op) {
      case Op::Leaf:
        break;
      case Op::MatMul: {
        if (wants_grad(n.in[0])) grad_buf(n.in[0]).noalias() += g * in_val(n, 1).transpose();
        if (wants_grad(n.in[1])) grad_buf(n.in[1]).noalias() += in_val(n, 0).transpose() * g;
        break;
      }
      case Op::Transpose:
        if (wants_grad(n.in[0])) grad_buf(n.in[0]) += g.transpose();
        break;
      case Op::Add:
        if (wants_grad(n.in[0])) grad_buf(n.in[0]) += g;
        if (wants_grad(n.in[1])) grad_buf(n.in[1]) += g;
        break;
      case Op::Sub:
        if (wants_grad(n.in[0])) grad_buf(n.in[0]) += g;
        if (wants_grad(n.in[1])) grad_buf(n.in[1]) -= g;
        break;
      case Op::CwiseMul:
        if (wants_grad(n.in[0])) grad_buf(n.in[0]) += g.cwiseProduct(in_val(n, 1));
        if (wants_grad(n.in[1])) grad_buf(n.in[1]) += g.cwiseProduct(in_val(n, 0));
        break;
      case Op::ScaleConst:
        if (wants_grad(n.in[0])) grad_buf(n.in[0]) += g * n.c;
        break;
      case Op::ShiftConst:
        if (wants_grad(n.in[0])) grad_buf(n.in[0]) += g;
        break;
      case Op::MulScalarVar: {
        const Scalar s = in_val(n, 1)(0, 0);
        if (wants_grad(n.in[0])) grad_buf(n.in[0]) += g * s;
        if (wants_grad(n.in[1])) grad_buf(n.in[1])(0, 0) += g.cwiseProduct(in_val(n, 0)).sum();
        break;
      }
      case Op::AddRowVec:
        if (wants_grad(n.in[0])) grad_buf(n.in[0]) += g;
        if (wants_grad(n.in[1])) grad_buf(n.in[1]) += g.colwise().sum();
        break;
      case Op::MulRowVec: {
        const RowArr r = in_val(n, 1).row(0).array();
        if (wants_grad(n.in[0])) grad_buf(n.in[0]) += (g.array().rowwise() * r).matrix();
        if (wants_grad(n.in[1]))
          grad_buf(n.in[1]) += g.cwiseProduct(in_val(n, 0)).colwise().sum();
        break;
      }
      case Op::AddColVec:
        if (wants_grad(n.in[0])) grad_buf(n.in[0]) += g;
        if (wants_grad(n.in[1])) grad_buf(n.in[1]) += g.rowwise().sum();
        break;
      case Op::Relu:
        if (wants_grad(n.in[0]))
          grad_buf(n.in[0]) +=
              (g.array() * (in_val(n, 0).array() > Scalar(0)).template cast<Scalar>()).matrix();
        break;
      case Op::Log:
        if (wants_grad(n.in[0]))
          grad_buf(n.in[0]) += (g.array() / in_val(n, 0).array()).matrix();
        break;
      case Op::Square:
        if (wants_grad(n.in[0]))
          grad_buf(n.in[0]) += (g.array() * in_val(n, 0).array() * Scalar(2)).matrix();
        break;
      case Op::Exp:
        if (wants_grad(n.in[0])) grad_buf(n.in[0]) += g.cwiseProduct(n.value);
        break;
      case Op::SqrtShift:
        if (wants_grad(n.in[0]))
          grad_buf(n.in[0]) += (g.array() * Scalar(0.5) / n.value.array()).matrix();
        break;
      case Op::RsqrtShift:
        if (wants_grad(n.in[0]))
          grad_buf(n.in[0]) +=
              (g.array() * Scalar(-0.5) * n.value.array().cube()).matrix();
        break;
      case Op::ConcatCols: {
        Index at = 0;
        for (std::int32_t cid : n.many) {
          const Index w = nodes_[static_cast<std::size_t>(cid)].value.cols();
          if (wants_grad(cid)) grad_buf(cid) += g.middleCols(at, w);
          at += w;
        }
        break;
      }
      case Op::ConcatRows: {
        Index at = 0;
        for (std::int32_t cid : n.many) {
          const Index h = nodes_[static_cast<std::size_t>(cid)].value.rows();
          if (wants_grad(cid)) grad_buf(cid) += g.middleRows(at, h);
          at += h;
        }
        break;
      }
      case Op::RowSelect:
        if (wants_grad(n.in[0])) {
          M& dst = grad_buf(n.in[0]);
          for (std::size_t i = 0; i < n.indices.size(); ++i)
            dst.row(n.indices[i]) += g.row(static_cast<Index>(i));
        }
        break;
      case Op::SumAll:
        if (wants_grad(n.in[0]))
          grad_buf(n.in[0]).array() += g(0, 0);
        break;
      case Op::RowSums:
        if (wants_grad(n.in[0]))
          grad_buf(n.in[0]) += g.col(0).replicate(1, in_val(n, 0).cols());
        break;
      case Op::ColSums:
        if (wants_grad(n.in[0]))
          grad_buf(n.in[0]) += g.row(0).replicate(in_val(n, 0).rows(), 1);
        break;
      case Op::ColMeans:
        if (wants_grad(n.in[0])) {
          const Scalar inv = Scalar(1) / static_cast<Scalar>(in_val(n, 0).rows());
          grad_buf(n.in[0]) += (g.row(0) * inv).replicate(in_val(n, 0).rows(), 1);
        }
        break;
      case Op::ColStds:
        if (wants_grad(n.in[0])) {
          const M& x = in_val(n, 0);
          const Scalar inv_n = Scalar(1) / static_cast<Scalar>(x.rows());
          const M mu = x.colwise().mean();
          const M centered = x.rowwise() - mu.row(0);
          // dy_j/dx_ij = (x_ij - mu_j) / (n * y_j)
          const RowArr coef = g.row(0).array() * inv_n / n.value.row(0).array();
          grad_buf(n.in[0]) += (centered.array().rowwise() * coef).matrix();
        }
        break;
      case Op::SoftmaxRows:
        if (wants_grad(n.in[0])) {
          const M& y = n.value;
          M gy = g.cwiseProduct(y);
          const M rs = gy.rowwise().sum();
          grad_buf(n.in[0]) +=
              gy - (y.array().colwise() * ColArr(rs.col(0).array())).matrix();
        }
        break;
      case Op::LogSoftmaxRows:
        if (wants_grad(n.in[0])) {
          const M sm = n.value.array().exp().matrix();
          const M rs = g.rowwise().sum();
          grad_buf(n.in[0]) +=
              g - (sm.array().colwise() * ColArr(rs.col(0).array())).matrix();
        }
        break;
      case Op::NeighborSum:
        if (wants_grad(n.in[0])) {
          M& dst = grad_buf(n.in[0]);
          for (const auto& e : n.edges) dst.row(e[0]) += g.row(e[1]);
        }
        break;
    }
  }

  std::vector<Node> nodes_;
};

template <class Scalar>
const DenseMatrix<Scalar>& Var<Scalar>::value() const {
  if (!valid()) throw ContractError("Var: invalid handle");
  return tape->value_of(id);
}

// ---- expression-friendly free functions ------------------------------------

template <class S> Var<S> matmul(Var<S> a, Var<S> b) { return a.tape->matmul(a, b); }
template <class S> Var<S> transpose(Var<S> a) { return a.tape->transpose(a); }
template <class S> Var<S> operator+(Var<S> a, Var<S> b) { return a.tape->add(a, b); }
template <class S> Var<S> operator-(Var<S> a, Var<S> b) { return a.tape->sub(a, b); }
template <class S> Var<S> cwise_mul(Var<S> a, Var<S> b) { return a.tape->cwise_mul(a, b); }
template <class S> Var<S> scale(Var<S> a, S c) { return a.tape->scale(a, c); }
template <class S> Var<S> shift(Var<S> a, S c) { return a.tape->shift(a, c); }
template <class S> Var<S> broadcast_scale(Var<S> a, Var<S> s) { return a.tape->broadcast_scale(a, s); }
template <class S> Var<S> add_row_vector(Var<S> a, Var<S> r) { return a.tape->add_row_vector(a, r); }
template <class S> Var<S> mul_row_vector(Var<S> a, Var<S> r) { return a.tape->mul_row_vector(a, r); }
template <class S> Var<S> add_col_vector(Var<S> a, Var<S> c) { return a.tape->add_col_vector(a, c); }
template <class S> Var<S> relu(Var<S> a) { return a.tape->relu(a); }
template <class S> Var<S> log(Var<S> a) { return a.tape->log(a); }
template <class S> Var<S> square(Var<S> a) { return a.tape->square(a); }
template <class S> Var<S> exp(Var<S> a) { return a.tape->exp(a); }
template <class S> Var<S> sqrt_shifted(Var<S> a, S eps) { return a.tape->sqrt_shifted(a, eps); }
template <class S> Var<S> rsqrt_shifted(Var<S> a, S eps) { return a.tape->rsqrt_shifted(a, eps); }
template <class S> Var<S> concat_cols(const std::vector<Var<S>>& p) { return p.front().tape->concat_cols(p); }
template <class S> Var<S> concat_rows(const std::vector<Var<S>>& p) { return p.front().tape->concat_rows(p); }
template <class S> Var<S> select_rows(Var<S> a, std::vector<Index> r) { return a.tape->select_rows(a, std::move(r)); }
template <class S> Var<S> sum_all(Var<S> a) { return a.tape->sum_all(a); }
template <class S> Var<S> row_sums(Var<S> a) { return a.tape->row_sums(a); }
template <class S> Var<S> col_sums(Var<S> a) { return a.tape->col_sums(a); }
template <class S> Var<S> col_means(Var<S> a) { return a.tape->col_means(a); }
template <class S> Var<S> col_stds(Var<S> a, S eps) { return a.tape->col_stds(a, eps); }
template <class S> Var<S> softmax_rows(Var<S> a) { return a.tape->softmax_rows(a); }
template <class S> Var<S> log_softmax_rows(Var<S> a) { return a.tape->log_softmax_rows(a); }
template <class S> Var<S> neighbor_sum(Var<S> a, std::vector<std::array<Index, 2>> e) {
  return a.tape->neighbor_sum(a, std::move(e));
}

using TapeD = Tape<Real>;
using VarD = Var<Real>;

}  // namespace protoglyph::ad
