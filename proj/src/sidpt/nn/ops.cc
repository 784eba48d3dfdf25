// Copyright (c) 2026 The sidpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sidpt/nn/ops.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sidpt/common/error.h"

namespace sidpt::nn {

namespace {

Graph& G(Var a) { return *a.graph(); }
bool Rg(Var a) { return a.graph()->RequiresGrad(a); }

void SameShape(Var a, Var b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()) + ")");
  }
}

void CheckScalar(Var s, const char* op) {
  if (s.rows() != 1 || s.cols() != 1) throw ShapeError(std::string(op) + ": expected 1x1");
}

double SigmoidValue(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Var Add(Var a, Var b) {
  SameShape(a, b, "Add");
  return G(a).Emit(a.value() + b.value(), Rg(a) || Rg(b), [a, b](const Matrix& g) {
    G(a).AccumulateGrad(a, g);
    G(b).AccumulateGrad(b, g);
  });
}

Var Sub(Var a, Var b) {
  SameShape(a, b, "Sub");
  return G(a).Emit(a.value() - b.value(), Rg(a) || Rg(b), [a, b](const Matrix& g) {
    G(a).AccumulateGrad(a, g);
    G(b).AccumulateGrad(b, -g);
  });
}

Var Mul(Var a, Var b) {
  SameShape(a, b, "Mul");
  return G(a).Emit(a.value().cwiseProduct(b.value()), Rg(a) || Rg(b), [a, b](const Matrix& g) {
    if (Rg(a)) G(a).AccumulateGrad(a, g.cwiseProduct(b.value()));
    if (Rg(b)) G(b).AccumulateGrad(b, g.cwiseProduct(a.value()));
  });
}

Var Scale(Var a, double s) {
  return G(a).Emit(a.value() * s, Rg(a), [a, s](const Matrix& g) { G(a).AccumulateGrad(a, g * s); });
}

Var AddScalar(Var a, double s) {
  Matrix v = a.value().array() + s;
  return G(a).Emit(std::move(v), Rg(a), [a](const Matrix& g) { G(a).AccumulateGrad(a, g); });
}

Var OneMinus(Var a) { return AddScalar(Scale(a, -1.0), 1.0); }

Var DivScalar(Var a, Var s) {
  CheckScalar(s, "DivScalar");
  const double d = s.scalar();
  return G(a).Emit(a.value() / d, Rg(a) || Rg(s), [a, s, d](const Matrix& g) {
    if (Rg(a)) G(a).AccumulateGrad(a, g / d);
    if (Rg(s)) {
      Matrix gs(1, 1);
      gs(0, 0) = -(g.cwiseProduct(a.value())).sum() / (d * d);
      G(s).AccumulateGrad(s, gs);
    }
  });
}

Var MulScalar(Var a, Var s) {
  CheckScalar(s, "MulScalar");
  const double k = s.scalar();
  return G(a).Emit(a.value() * k, Rg(a) || Rg(s), [a, s, k](const Matrix& g) {
    if (Rg(a)) G(a).AccumulateGrad(a, g * k);
    if (Rg(s)) {
      Matrix gs(1, 1);
      gs(0, 0) = g.cwiseProduct(a.value()).sum();
      G(s).AccumulateGrad(s, gs);
    }
  });
}

Var MatMul(Var a, Var b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("MatMul: inner dimensions " + std::to_string(a.cols()) + " and " +
                     std::to_string(b.rows()));
  }
  Matrix v = a.value() * b.value();
  return G(a).Emit(std::move(v), Rg(a) || Rg(b), [a, b](const Matrix& g) {
    if (Rg(a)) G(a).AccumulateGrad(a, g * b.value().transpose());
    if (Rg(b)) G(b).AccumulateGrad(b, a.value().transpose() * g);
  });
}

Var Transpose(Var a) {
  Matrix v = a.value().transpose();
  return G(a).Emit(std::move(v), Rg(a), [a](const Matrix& g) {
    G(a).AccumulateGrad(a, g.transpose());
  });
}

Var AddRowBroadcast(Var a, Var row) {
  if (row.rows() != 1 || row.cols() != a.cols()) throw ShapeError("AddRowBroadcast: bad row");
  Matrix v = a.value().rowwise() + row.value().row(0);
  return G(a).Emit(std::move(v), Rg(a) || Rg(row), [a, row](const Matrix& g) {
    if (Rg(a)) G(a).AccumulateGrad(a, g);
    if (Rg(row)) G(row).AccumulateGrad(row, g.colwise().sum());
  });
}

Var MulColBroadcast(Var a, Var col) {
  if (col.cols() != 1 || col.rows() != a.rows()) throw ShapeError("MulColBroadcast: bad col");
  Matrix v = col.value().col(0).asDiagonal() * a.value();
  return G(a).Emit(std::move(v), Rg(a) || Rg(col), [a, col](const Matrix& g) {
    if (Rg(a)) G(a).AccumulateGrad(a, col.value().col(0).asDiagonal() * g);
    if (Rg(col)) G(col).AccumulateGrad(col, g.cwiseProduct(a.value()).rowwise().sum());
  });
}

Var BroadcastRows(Var row, int n) {
  if (row.rows() != 1) throw ShapeError("BroadcastRows: expected a row");
  Matrix v = row.value().replicate(n, 1);
  return G(row).Emit(std::move(v), Rg(row), [row](const Matrix& g) {
    G(row).AccumulateGrad(row, g.colwise().sum());
  });
}

Var Relu(Var a) {
  Matrix v = a.value().cwiseMax(0.0);
  return G(a).Emit(std::move(v), Rg(a), [a](const Matrix& g) {
    Matrix d = (a.value().array() > 0.0).cast<double>().matrix().cwiseProduct(g);
    G(a).AccumulateGrad(a, d);
  });
}

Var Tanh(Var a) {
  Matrix v = a.value().array().tanh();
  Matrix y = v;
  return G(a).Emit(std::move(v), Rg(a), [a, y](const Matrix& g) {
    Matrix d = g.array() * (1.0 - y.array().square());
    G(a).AccumulateGrad(a, d);
  });
}

Var Sigmoid(Var a) {
  Matrix v = a.value().unaryExpr([](double x) { return SigmoidValue(x); });
  Matrix y = v;
  return G(a).Emit(std::move(v), Rg(a), [a, y](const Matrix& g) {
    Matrix d = g.array() * y.array() * (1.0 - y.array());
    G(a).AccumulateGrad(a, d);
  });
}

Var Exp(Var a) {
  Matrix v = a.value().array().exp();
  Matrix y = v;
  return G(a).Emit(std::move(v), Rg(a), [a, y](const Matrix& g) {
    G(a).AccumulateGrad(a, g.cwiseProduct(y));
  });
}

Var Log(Var a) {
  Matrix v = a.value().array().log();
  return G(a).Emit(std::move(v), Rg(a), [a](const Matrix& g) {
    G(a).AccumulateGrad(a, g.cwiseQuotient(a.value()));
  });
}

Var Square(Var a) {
  Matrix v = a.value().cwiseProduct(a.value());
  return G(a).Emit(std::move(v), Rg(a), [a](const Matrix& g) {
    G(a).AccumulateGrad(a, 2.0 * g.cwiseProduct(a.value()));
  });
}

Var Sqrt(Var a, double floor) {
  Matrix v = a.value().cwiseMax(0.0).cwiseSqrt();
  Matrix y = v;
  return G(a).Emit(std::move(v), Rg(a), [a, y, floor](const Matrix& g) {
    Matrix d(g.rows(), g.cols());
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      d.data()[i] = a.value().data()[i] > floor ? 0.5 * g.data()[i] / y.data()[i] : 0.0;
    }
    G(a).AccumulateGrad(a, d);
  });
}

Var Softplus(Var a) {
  Matrix v = a.value().unaryExpr(
      [](double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::fabs(x))); });
  return G(a).Emit(std::move(v), Rg(a), [a](const Matrix& g) {
    Matrix d = a.value().unaryExpr([](double x) { return SigmoidValue(x); });
    G(a).AccumulateGrad(a, g.cwiseProduct(d));
  });
}

Var SumAll(Var a) {
  Matrix v(1, 1);
  v(0, 0) = a.value().sum();
  return G(a).Emit(std::move(v), Rg(a), [a](const Matrix& g) {
    G(a).AccumulateGrad(a, Matrix::Constant(a.rows(), a.cols(), g(0, 0)));
  });
}

Var MeanAll(Var a) {
  const double n = static_cast<double>(a.value().size());
  return Scale(SumAll(a), 1.0 / n);
}

Var ColSums(Var a) {
  Matrix v = a.value().colwise().sum();
  return G(a).Emit(std::move(v), Rg(a), [a](const Matrix& g) {
    G(a).AccumulateGrad(a, g.replicate(a.rows(), 1));
  });
}

Var MeanRows(Var a) { return Scale(ColSums(a), 1.0 / static_cast<double>(a.rows())); }

Var RowSums(Var a) {
  Matrix v = a.value().rowwise().sum();
  return G(a).Emit(std::move(v), Rg(a), [a](const Matrix& g) {
    G(a).AccumulateGrad(a, g.replicate(1, a.cols()));
  });
}

Var MaxAll(Var a) {
  if (a.value().size() == 0) throw ShapeError("MaxAll of empty matrix");
  Eigen::Index r = 0, c = 0;
  double m = a.value().maxCoeff(&r, &c);
  Matrix v(1, 1);
  v(0, 0) = m;
  return G(a).Emit(std::move(v), Rg(a), [a, r, c](const Matrix& g) {
    Matrix d = Matrix::Zero(a.rows(), a.cols());
    d(r, c) = g(0, 0);
    G(a).AccumulateGrad(a, d);
  });
}

Var ConcatCols(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeError("ConcatCols: no inputs");
  const Eigen::Index rows = parts[0].rows();
  Eigen::Index cols = 0;
  bool rg = false;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw ShapeError("ConcatCols: row mismatch");
    cols += p.cols();
    rg = rg || Rg(p);
  }
  Matrix v(rows, cols);
  Eigen::Index off = 0;
  for (const auto& p : parts) {
    v.middleCols(off, p.cols()) = p.value();
    off += p.cols();
  }
  return G(parts[0]).Emit(std::move(v), rg, [parts](const Matrix& g) {
    Eigen::Index o = 0;
    for (const auto& p : parts) {
      if (Rg(p)) G(p).AccumulateGrad(p, g.middleCols(o, p.cols()));
      o += p.cols();
    }
  });
}

Var ConcatRows(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeError("ConcatRows: no inputs");
  const Eigen::Index cols = parts[0].cols();
  Eigen::Index rows = 0;
  bool rg = false;
  for (const auto& p : parts) {
    if (p.cols() != cols) throw ShapeError("ConcatRows: column mismatch");
    rows += p.rows();
    rg = rg || Rg(p);
  }
  Matrix v(rows, cols);
  Eigen::Index off = 0;
  for (const auto& p : parts) {
    v.middleRows(off, p.rows()) = p.value();
    off += p.rows();
  }
  return G(parts[0]).Emit(std::move(v), rg, [parts](const Matrix& g) {
    Eigen::Index o = 0;
    for (const auto& p : parts) {
      if (Rg(p)) G(p).AccumulateGrad(p, g.middleRows(o, p.rows()));
      o += p.rows();
    }
  });
}

Var SliceRows(Var a, int start, int count) {
  if (start < 0 || count < 0 || start + count > a.rows()) throw ShapeError("SliceRows: out of range");
  Matrix v = a.value().middleRows(start, count);
  return G(a).Emit(std::move(v), Rg(a), [a, start, count](const Matrix& g) {
    Matrix d = Matrix::Zero(a.rows(), a.cols());
    d.middleRows(start, count) = g;
    G(a).AccumulateGrad(a, d);
  });
}

Var SliceCols(Var a, int start, int count) {
  if (start < 0 || count < 0 || start + count > a.cols()) throw ShapeError("SliceCols: out of range");
  Matrix v = a.value().middleCols(start, count);
  return G(a).Emit(std::move(v), Rg(a), [a, start, count](const Matrix& g) {
    Matrix d = Matrix::Zero(a.rows(), a.cols());
    d.middleCols(start, count) = g;
    G(a).AccumulateGrad(a, d);
  });
}

namespace {

Matrix SoftmaxRowsValue(const Matrix& a) {
  Matrix y(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double m = a.row(i).maxCoeff();
    y.row(i) = (a.row(i).array() - m).exp();
    y.row(i) /= y.row(i).sum();
  }
  return y;
}

}  // namespace

Var SoftmaxRows(Var a) {
  Matrix y = SoftmaxRowsValue(a.value());
  Matrix keep = y;
  return G(a).Emit(std::move(y), Rg(a), [a, keep](const Matrix& g) {
    ColVector dot = g.cwiseProduct(keep).rowwise().sum();
    Matrix d = keep.cwiseProduct(g - dot.replicate(1, g.cols()));
    G(a).AccumulateGrad(a, d);
  });
}

Var LogSoftmaxRows(Var a) {
  const Matrix& x = a.value();
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double m = x.row(i).maxCoeff();
    double lse = m + std::log((x.row(i).array() - m).exp().sum());
    y.row(i) = x.row(i).array() - lse;
  }
  Matrix p = y.array().exp();
  return G(a).Emit(std::move(y), Rg(a), [a, p](const Matrix& g) {
    ColVector s = g.rowwise().sum();
    Matrix d = g - p.cwiseProduct(s.replicate(1, g.cols()));
    G(a).AccumulateGrad(a, d);
  });
}

Var SoftmaxCol(Var logits) {
  if (logits.cols() != 1) throw ShapeError("SoftmaxCol: expected a column");
  return Transpose(SoftmaxRows(Transpose(logits)));
}

Var MaskedSoftmaxCol(Var logits, Var weights) {
  if (logits.cols() != 1) throw ShapeError("MaskedSoftmaxCol: expected a column");
  SameShape(logits, weights, "MaskedSoftmaxCol");
  const Matrix& l = logits.value();
  const Matrix& w = weights.value();
  const Eigen::Index n = l.rows();
  double m = -std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t < n; ++t) {
    if (w(t, 0) < 0) throw DegenerateInputError("negative attention weight");
    if (w(t, 0) > 0) m = std::max(m, l(t, 0));
  }
  if (!std::isfinite(m)) throw DegenerateInputError("attention weights are all zero");
  Matrix e(n, 1), z(n, 1);
  for (Eigen::Index t = 0; t < n; ++t) {
    e(t, 0) = std::exp(std::min(l(t, 0) - m, 700.0));
    z(t, 0) = w(t, 0) * e(t, 0);
  }
  const double sum = z.sum();
  Matrix a = z / sum;
  Matrix keep = a;
  return G(logits).Emit(
      std::move(a), Rg(logits) || Rg(weights), [logits, weights, keep, e, z, sum](const Matrix& g) {
        const double dot = g.cwiseProduct(keep).sum();
        Matrix gz = (g.array() - dot) / sum;
        if (Rg(logits)) G(logits).AccumulateGrad(logits, gz.cwiseProduct(z));
        if (Rg(weights)) G(weights).AccumulateGrad(weights, gz.cwiseProduct(e));
      });
}

Var PickPerRow(Var a, const std::vector<int>& index) {
  if (static_cast<Eigen::Index>(index.size()) != a.rows()) throw ShapeError("PickPerRow: size");
  Matrix v(a.rows(), 1);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (index[i] < 0 || index[i] >= a.cols()) throw ShapeError("PickPerRow: index out of range");
    v(i, 0) = a.value()(i, index[i]);
  }
  return G(a).Emit(std::move(v), Rg(a), [a, index](const Matrix& g) {
    Matrix d = Matrix::Zero(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) d(i, index[i]) = g(i, 0);
    G(a).AccumulateGrad(a, d);
  });
}

Var NormalizeRows(Var a, double eps) {
  const Matrix& x = a.value();
  ColVector norms = x.rowwise().norm().cwiseMax(eps);
  Matrix y = norms.cwiseInverse().asDiagonal() * x;
  Matrix keep = y;
  return G(a).Emit(std::move(y), Rg(a), [a, keep, norms, eps](const Matrix& g) {
    Matrix d(g.rows(), g.cols());
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      if (norms(i) > eps) {
        double dot = g.row(i).dot(keep.row(i));
        d.row(i) = (g.row(i) - dot * keep.row(i)) / norms(i);
      } else {
        d.row(i) = g.row(i) / eps;
      }
    }
    G(a).AccumulateGrad(a, d);
  });
}

Var Conv1d(Var x, Var weight, Var bias, int kernel, int dilation) {
  const Eigen::Index t_len = x.rows();
  const Eigen::Index cin = x.cols();
  if (kernel < 1 || dilation < 1) throw ShapeError("Conv1d: kernel and dilation must be >= 1");
  if (weight.rows() != kernel * cin) throw ShapeError("Conv1d: weight rows != kernel * Cin");
  const Eigen::Index cout = weight.cols();
  if (bias.rows() != 1 || bias.cols() != cout) throw ShapeError("Conv1d: bias shape");
  const int half = (kernel - 1) / 2;

  Matrix cols = Matrix::Zero(t_len, kernel * cin);
  for (int j = 0; j < kernel; ++j) {
    const Eigen::Index off = static_cast<Eigen::Index>(j - half) * dilation;
    const Eigen::Index lo = std::max<Eigen::Index>(0, -off);
    const Eigen::Index hi = std::min<Eigen::Index>(t_len, t_len - off);
    if (hi > lo) cols.block(lo, j * cin, hi - lo, cin) = x.value().middleRows(lo + off, hi - lo);
  }
  Matrix y = cols * weight.value();
  y.rowwise() += bias.value().row(0);
  const bool rg = Rg(x) || Rg(weight) || Rg(bias);
  return G(x).Emit(std::move(y), rg, [x, weight, bias, kernel, dilation, half, cols, cin,
                                      t_len](const Matrix& g) {
    if (Rg(weight)) G(weight).AccumulateGrad(weight, cols.transpose() * g);
    if (Rg(bias)) G(bias).AccumulateGrad(bias, g.colwise().sum());
    if (Rg(x)) {
      Matrix dcols = g * weight.value().transpose();
      Matrix dx = Matrix::Zero(t_len, cin);
      for (int j = 0; j < kernel; ++j) {
        const Eigen::Index off = static_cast<Eigen::Index>(j - half) * dilation;
        const Eigen::Index lo = std::max<Eigen::Index>(0, -off);
        const Eigen::Index hi = std::min<Eigen::Index>(t_len, t_len - off);
        if (hi > lo) dx.middleRows(lo + off, hi - lo) += dcols.block(lo, j * cin, hi - lo, cin);
      }
      G(x).AccumulateGrad(x, dx);
    }
  });
}

Var Lstm(Var x, Var w_ih, Var w_hh, Var bias, bool reverse) {
  const Eigen::Index t_len = x.rows();
  const Eigen::Index hid = w_hh.rows();
  if (w_ih.rows() != x.cols() || w_ih.cols() != 4 * hid || w_hh.cols() != 4 * hid ||
      bias.rows() != 1 || bias.cols() != 4 * hid) {
    throw ShapeError("Lstm: parameter shapes inconsistent with input");
  }
  Matrix pre = x.value() * w_ih.value();
  pre.rowwise() += bias.value().row(0);

  // Per-frame caches, indexed by frame (not by step).
  Matrix gi(t_len, hid), gf(t_len, hid), gg(t_len, hid), go(t_len, hid);
  Matrix c(t_len, hid), tc(t_len, hid), h(t_len, hid), h_prev(t_len, hid), c_prev(t_len, hid);
  RowVector hp = RowVector::Zero(hid), cp = RowVector::Zero(hid);
  for (Eigen::Index step = 0; step < t_len; ++step) {
    const Eigen::Index t = reverse ? t_len - 1 - step : step;
    RowVector z = pre.row(t) + hp * w_hh.value();
    for (Eigen::Index k = 0; k < hid; ++k) {
      gi(t, k) = SigmoidValue(z(k));
      gf(t, k) = SigmoidValue(z(hid + k));
      gg(t, k) = std::tanh(z(2 * hid + k));
      go(t, k) = SigmoidValue(z(3 * hid + k));
    }
    h_prev.row(t) = hp;
    c_prev.row(t) = cp;
    c.row(t) = gf.row(t).cwiseProduct(cp) + gi.row(t).cwiseProduct(gg.row(t));
    tc.row(t) = c.row(t).array().tanh();
    h.row(t) = go.row(t).cwiseProduct(tc.row(t));
    hp = h.row(t);
    cp = c.row(t);
  }
  Matrix out = h;
  const bool rg = Rg(x) || Rg(w_ih) || Rg(w_hh) || Rg(bias);
  return G(x).Emit(std::move(out), rg, [=](const Matrix& g) {
    Matrix dz(t_len, 4 * hid);
    RowVector dh_next = RowVector::Zero(hid), dc_next = RowVector::Zero(hid);
    for (Eigen::Index step = t_len - 1; step >= 0; --step) {
      const Eigen::Index t = reverse ? t_len - 1 - step : step;
      RowVector dh = g.row(t) + dh_next;
      RowVector d_o = dh.cwiseProduct(tc.row(t));
      RowVector dc = dh.cwiseProduct(go.row(t)).cwiseProduct(
                         (1.0 - tc.row(t).array().square()).matrix()) +
                     dc_next;
      RowVector d_f = dc.cwiseProduct(c_prev.row(t));
      RowVector d_i = dc.cwiseProduct(gg.row(t));
      RowVector d_g = dc.cwiseProduct(gi.row(t));
      dc_next = dc.cwiseProduct(gf.row(t));
      for (Eigen::Index k = 0; k < hid; ++k) {
        dz(t, k) = d_i(k) * gi(t, k) * (1.0 - gi(t, k));
        dz(t, hid + k) = d_f(k) * gf(t, k) * (1.0 - gf(t, k));
        dz(t, 2 * hid + k) = d_g(k) * (1.0 - gg(t, k) * gg(t, k));
        dz(t, 3 * hid + k) = d_o(k) * go(t, k) * (1.0 - go(t, k));
      }
      dh_next = dz.row(t) * w_hh.value().transpose();
    }
    if (Rg(w_ih)) G(w_ih).AccumulateGrad(w_ih, x.value().transpose() * dz);
    if (Rg(w_hh)) G(w_hh).AccumulateGrad(w_hh, h_prev.transpose() * dz);
    if (Rg(bias)) G(bias).AccumulateGrad(bias, dz.colwise().sum());
    if (Rg(x)) G(x).AccumulateGrad(x, dz * w_ih.value().transpose());
  });
}

Var AamLogits(Var cosines, int label, double margin, double scale) {
  if (cosines.rows() != 1) throw ShapeError("AamLogits: expected a row of cosines");
  if (label < 0 || label >= cosines.cols()) throw ShapeError("AamLogits: label out of range");
  constexpr double kLimit = 1.0 - 1e-7;
  const double cos_m = std::cos(margin), sin_m = std::sin(margin);
  Matrix v = cosines.value() * scale;
  const double c = std::clamp(cosines.value()(0, label), -kLimit, kLimit);
  const double s = std::sqrt(1.0 - c * c);
  v(0, label) = scale * (c * cos_m - s * sin_m);
  const double dlabel = scale * (cos_m + c * sin_m / s);
  return G(cosines).Emit(std::move(v), Rg(cosines), [cosines, label, scale, dlabel](const Matrix& g) {
    Matrix d = g * scale;
    d(0, label) = g(0, label) * dlabel;
    G(cosines).AccumulateGrad(cosines, d);
  });
}

}  // namespace sidpt::nn
