// core/src/nn/ops.cpp

// Copyright 2026  Tandem Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "tandem/nn/ops.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <memory>

#include "tandem/common/error.hpp"

namespace tandem::nn {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>;
using Map = Eigen::Map<RowMat>;
using CMap = Eigen::Map<const RowMat>;

void require(bool ok, const char* msg) {
  if (!ok) throw InvalidInput(msg);
}

void require_same_shape(const Variable& a, const Variable& b,
                        const char* who) {
  if (!a.value().same_shape(b.value()))
    throw InvalidInput(std::string(who) + ": shape mismatch " +
                       a.value().shape_str() + " vs " + b.value().shape_str());
}

// Shorthand for elementwise unary ops: dy/dx supplied per element from the
// input and output values.
template <typename Fwd, typename Bwd>
Variable unary_op(const Variable& a, Fwd f, Bwd dfdx) {
  const Tensor& av = a.value();
  Tensor out(av.shape());
  for (std::size_t i = 0; i < av.numel(); ++i) out[i] = f(av[i]);
  return Variable::op(std::move(out), {a}, [dfdx](VarNode& self) {
    const Tensor& av2 = self.parents[0]->value;
    Tensor ga(av2.shape());
    for (std::size_t i = 0; i < av2.numel(); ++i)
      ga[i] = self.grad[i] * dfdx(av2[i], self.value[i]);
    self.parents[0]->accumulate(ga);
  });
}

}  // namespace

Variable add(const Variable& a, const Variable& b) {
  require_same_shape(a, b, "add");
  Tensor out = a.value();
  out.add_(b.value());
  return Variable::op(std::move(out), {a, b}, [](VarNode& self) {
    self.parents[0]->accumulate(self.grad);
    self.parents[1]->accumulate(self.grad);
  });
}

Variable sub(const Variable& a, const Variable& b) {
  require_same_shape(a, b, "sub");
  Tensor out(a.value().shape());
  for (std::size_t i = 0; i < out.numel(); ++i)
    out[i] = a.value()[i] - b.value()[i];
  return Variable::op(std::move(out), {a, b}, [](VarNode& self) {
    self.parents[0]->accumulate(self.grad);
    if (self.parents[1]->requires_grad) {
      Tensor gb(self.grad.shape());
      for (std::size_t i = 0; i < gb.numel(); ++i) gb[i] = -self.grad[i];
      self.parents[1]->accumulate(gb);
    }
  });
}

Variable mul(const Variable& a, const Variable& b) {
  require_same_shape(a, b, "mul");
  Tensor out(a.value().shape());
  for (std::size_t i = 0; i < out.numel(); ++i)
    out[i] = a.value()[i] * b.value()[i];
  return Variable::op(std::move(out), {a, b}, [](VarNode& self) {
    const Tensor& av = self.parents[0]->value;
    const Tensor& bv = self.parents[1]->value;
    if (self.parents[0]->requires_grad) {
      Tensor ga(av.shape());
      for (std::size_t i = 0; i < ga.numel(); ++i)
        ga[i] = self.grad[i] * bv[i];
      self.parents[0]->accumulate(ga);
    }
    if (self.parents[1]->requires_grad) {
      Tensor gb(bv.shape());
      for (std::size_t i = 0; i < gb.numel(); ++i)
        gb[i] = self.grad[i] * av[i];
      self.parents[1]->accumulate(gb);
    }
  });
}

Variable add_scalar(const Variable& a, double c) {
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.numel(); ++i) out[i] += c;
  return Variable::op(std::move(out), {a}, [](VarNode& self) {
    self.parents[0]->accumulate(self.grad);
  });
}

Variable mul_scalar(const Variable& a, double c) {
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.numel(); ++i) out[i] *= c;
  return Variable::op(std::move(out), {a}, [c](VarNode& self) {
    Tensor ga(self.grad.shape());
    for (std::size_t i = 0; i < ga.numel(); ++i) ga[i] = self.grad[i] * c;
    self.parents[0]->accumulate(ga);
  });
}

Variable neg(const Variable& a) { return mul_scalar(a, -1.0); }

Variable vexp(const Variable& a) {
  return unary_op(
      a, [](double x) { return std::exp(x); },
      [](double, double y) { return y; });
}

Variable vlog(const Variable& a) {
  return unary_op(
      a, [](double x) { return std::log(x); },
      [](double x, double) { return 1.0 / x; });
}

Variable log_floor(const Variable& a, double eps) {
  return unary_op(
      a, [eps](double x) { return std::log(x + eps); },
      [eps](double x, double) { return 1.0 / (x + eps); });
}

Variable vsqrt(const Variable& a) {
  return unary_op(
      a, [](double x) { return std::sqrt(x); },
      [](double, double y) { return 0.5 / y; });
}

Variable relu(const Variable& a) {
  return unary_op(
      a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Variable gelu(const Variable& a) {
  constexpr double inv_sqrt2 = 0.7071067811865475244;
  constexpr double inv_sqrt2pi = 0.3989422804014326779;
  return unary_op(
      a,
      [=](double x) { return 0.5 * x * (1.0 + std::erf(x * inv_sqrt2)); },
      [=](double x, double) {
        const double phi = 0.5 * (1.0 + std::erf(x * inv_sqrt2));
        return phi + x * inv_sqrt2pi * std::exp(-0.5 * x * x);
      });
}

Variable sigmoid(const Variable& a) {
  return unary_op(
      a,
      [](double x) {
        return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                        : std::exp(x) / (1.0 + std::exp(x));
      },
      [](double, double y) { return y * (1.0 - y); });
}

Variable vtanh(const Variable& a) {
  return unary_op(
      a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Variable sum(const Variable& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.value().numel(); ++i) s += a.value()[i];
  return Variable::op(Tensor::scalar(s), {a}, [](VarNode& self) {
    const double g = self.grad[0];
    Tensor ga(self.parents[0]->value.shape(), g);
    self.parents[0]->accumulate(ga);
  });
}

Variable mean(const Variable& a) {
  const auto n = static_cast<double>(a.value().numel());
  require(n > 0, "mean: empty tensor");
  double s = 0.0;
  for (std::size_t i = 0; i < a.value().numel(); ++i) s += a.value()[i];
  return Variable::op(Tensor::scalar(s / n), {a}, [n](VarNode& self) {
    Tensor ga(self.parents[0]->value.shape(), self.grad[0] / n);
    self.parents[0]->accumulate(ga);
  });
}

Variable weighted_sum(const std::vector<Variable>& items,
                      const std::vector<double>& coeffs, double denom) {
  require(!items.empty(), "weighted_sum: empty");
  require(items.size() == coeffs.size(), "weighted_sum: length mismatch");
  require(denom != 0.0, "weighted_sum: zero denominator");
  double s = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    require(items[i].value().numel() == 1, "weighted_sum: non-scalar item");
    s += coeffs[i] * items[i].value().item();
  }
  return Variable::op(Tensor::scalar(s / denom), items,
                      [coeffs, denom](VarNode& self) {
                        const double g = self.grad[0];
                        for (std::size_t i = 0; i < self.parents.size(); ++i) {
                          Tensor gi(self.parents[i]->value.shape(),
                                    g * coeffs[i] / denom);
                          self.parents[i]->accumulate(gi);
                        }
                      });
}

Variable matmul(const Variable& a, const Variable& b) {
  require(a.value().ndim() == 2 && b.value().ndim() == 2, "matmul: rank");
  const int m = a.value().dim(0), k = a.value().dim(1);
  const int k2 = b.value().dim(0), n = b.value().dim(1);
  require(k == k2, "matmul: inner extents differ");
  Tensor out({m, n});
  Map(out.data(), m, n) = CMap(a.value().data(), m, k) *
                          CMap(b.value().data(), k, n);
  return Variable::op(std::move(out), {a, b}, [m, k, n](VarNode& self) {
    CMap g(self.grad.data(), m, n);
    const Tensor& av = self.parents[0]->value;
    const Tensor& bv = self.parents[1]->value;
    if (self.parents[0]->requires_grad) {
      Tensor ga({m, k});
      Map(ga.data(), m, k) = g * CMap(bv.data(), k, n).transpose();
      self.parents[0]->accumulate(ga);
    }
    if (self.parents[1]->requires_grad) {
      Tensor gb({k, n});
      Map(gb.data(), k, n) = CMap(av.data(), m, k).transpose() * g;
      self.parents[1]->accumulate(gb);
    }
  });
}

Variable linear(const Variable& x, const Variable& w, const Variable& b) {
  require(x.value().ndim() == 2 && w.value().ndim() == 2, "linear: rank");
  const int n = x.value().dim(0), in = x.value().dim(1);
  const int out_dim = w.value().dim(0);
  require(w.value().dim(1) == in, "linear: weight width mismatch");
  require(b.value().numel() == static_cast<std::size_t>(out_dim),
          "linear: bias length mismatch");
  Tensor out({n, out_dim});
  Map o(out.data(), n, out_dim);
  o = CMap(x.value().data(), n, in) *
      CMap(w.value().data(), out_dim, in).transpose();
  o.rowwise() += Eigen::Map<const Eigen::RowVectorXd>(b.value().data(),
                                                      out_dim);
  return Variable::op(std::move(out), {x, w, b},
                      [n, in, out_dim](VarNode& self) {
    CMap g(self.grad.data(), n, out_dim);
    const Tensor& xv = self.parents[0]->value;
    const Tensor& wv = self.parents[1]->value;
    if (self.parents[0]->requires_grad) {
      Tensor gx({n, in});
      Map(gx.data(), n, in) = g * CMap(wv.data(), out_dim, in);
      self.parents[0]->accumulate(gx);
    }
    if (self.parents[1]->requires_grad) {
      Tensor gw({out_dim, in});
      Map(gw.data(), out_dim, in) =
          g.transpose() * CMap(xv.data(), n, in);
      self.parents[1]->accumulate(gw);
    }
    if (self.parents[2]->requires_grad) {
      Tensor gb({out_dim});
      Eigen::Map<Eigen::RowVectorXd>(gb.data(), out_dim) = g.colwise().sum();
      self.parents[2]->accumulate(gb);
    }
  });
}

Variable matmul_const_left(const Tensor& m, const Variable& x) {
  require(m.ndim() == 2 && x.value().ndim() == 2, "matmul_const_left: rank");
  const int r = m.dim(0), f = m.dim(1), t = x.value().dim(1);
  require(x.value().dim(0) == f, "matmul_const_left: inner extents differ");
  Tensor out({r, t});
  Map(out.data(), r, t) =
      CMap(m.data(), r, f) * CMap(x.value().data(), f, t);
  auto mp = std::make_shared<Tensor>(m);
  return Variable::op(std::move(out), {x}, [mp, r, f, t](VarNode& self) {
    Tensor gx({f, t});
    Map(gx.data(), f, t) =
        CMap(mp->data(), r, f).transpose() * CMap(self.grad.data(), r, t);
    self.parents[0]->accumulate(gx);
  });
}

Variable reshape(const Variable& a, std::vector<int> shape) {
  require(shape_numel(shape) == a.value().numel(), "reshape: numel changes");
  Tensor out(std::move(shape),
             std::vector<double>(a.value().data(),
                                 a.value().data() + a.value().numel()));
  return Variable::op(std::move(out), {a}, [](VarNode& self) {
    const Tensor& av = self.parents[0]->value;
    Tensor ga(av.shape(), std::vector<double>(self.grad.data(),
                                              self.grad.data() +
                                                  self.grad.numel()));
    self.parents[0]->accumulate(ga);
  });
}

namespace {

// [b x c x rest] extent helpers.
void split_bc_rest(const Tensor& t, int& b, int& c, std::size_t& rest,
                   const char* who) {
  require(t.ndim() >= 2, who);
  b = t.dim(0);
  c = t.dim(1);
  rest = 1;
  for (int i = 2; i < t.ndim(); ++i)
    rest *= static_cast<std::size_t>(t.dim(i));
}

}  // namespace

Variable concat_channels(const Variable& a, const Variable& b) {
  int ba, ca, bb, cb;
  std::size_t ra, rb;
  split_bc_rest(a.value(), ba, ca, ra, "concat_channels: rank");
  split_bc_rest(b.value(), bb, cb, rb, "concat_channels: rank");
  require(ba == bb && ra == rb && a.value().ndim() == b.value().ndim(),
          "concat_channels: incompatible shapes");
  std::vector<int> shape = a.value().shape();
  shape[1] = ca + cb;
  Tensor out(shape);
  for (int i = 0; i < ba; ++i) {
    const std::size_t oa = static_cast<std::size_t>(i) * (ca + cb) * ra;
    std::copy_n(a.value().data() + static_cast<std::size_t>(i) * ca * ra,
                static_cast<std::size_t>(ca) * ra, out.data() + oa);
    std::copy_n(b.value().data() + static_cast<std::size_t>(i) * cb * ra,
                static_cast<std::size_t>(cb) * ra,
                out.data() + oa + static_cast<std::size_t>(ca) * ra);
  }
  return Variable::op(std::move(out), {a, b}, [ba, ca, cb, ra](VarNode& self) {
    for (int side = 0; side < 2; ++side) {
      auto& p = self.parents[static_cast<std::size_t>(side)];
      if (!p->requires_grad) continue;
      const int c = side == 0 ? ca : cb;
      const std::size_t skip = side == 0 ? 0 : static_cast<std::size_t>(ca) * ra;
      Tensor gp(p->value.shape());
      for (int i = 0; i < ba; ++i)
        std::copy_n(self.grad.data() +
                        static_cast<std::size_t>(i) * (ca + cb) * ra + skip,
                    static_cast<std::size_t>(c) * ra,
                    gp.data() + static_cast<std::size_t>(i) * c * ra);
      p->accumulate(gp);
    }
  });
}

Variable slice_channels(const Variable& a, int from, int to) {
  int b, c;
  std::size_t rest;
  split_bc_rest(a.value(), b, c, rest, "slice_channels: rank");
  require(0 <= from && from < to && to <= c, "slice_channels: bad range");
  std::vector<int> shape = a.value().shape();
  shape[1] = to - from;
  Tensor out(shape);
  for (int i = 0; i < b; ++i)
    std::copy_n(a.value().data() +
                    (static_cast<std::size_t>(i) * c + from) * rest,
                static_cast<std::size_t>(to - from) * rest,
                out.data() + static_cast<std::size_t>(i) * (to - from) * rest);
  return Variable::op(std::move(out), {a}, [b, c, rest, from, to](VarNode& self) {
    Tensor ga(self.parents[0]->value.shape());
    for (int i = 0; i < b; ++i) {
      const double* g = self.grad.data() +
                        static_cast<std::size_t>(i) * (to - from) * rest;
      double* dst =
          ga.data() + (static_cast<std::size_t>(i) * c + from) * rest;
      for (std::size_t j = 0;
           j < static_cast<std::size_t>(to - from) * rest; ++j)
        dst[j] += g[j];
    }
    self.parents[0]->accumulate(ga);
  });
}

Variable select_item(const Variable& a, int index) {
  require(a.value().ndim() >= 1, "select_item: rank");
  const int b = a.value().dim(0);
  require(0 <= index && index < b, "select_item: index out of range");
  std::vector<int> shape(a.value().shape().begin() + 1,
                         a.value().shape().end());
  const std::size_t stride = shape_numel(shape);
  Tensor out(shape, std::vector<double>(
                        a.value().data() + index * stride,
                        a.value().data() + (index + 1) * stride));
  return Variable::op(std::move(out), {a}, [index, stride](VarNode& self) {
    Tensor ga(self.parents[0]->value.shape());
    std::copy_n(self.grad.data(), stride,
                ga.data() + static_cast<std::size_t>(index) * stride);
    self.parents[0]->accumulate(ga);
  });
}

Variable slice_last(const Variable& a, int to) {
  require(a.value().ndim() >= 1, "slice_last: rank");
  const int t = a.value().dim(a.value().ndim() - 1);
  require(0 < to && to <= t, "slice_last: bad extent");
  std::vector<int> shape = a.value().shape();
  shape.back() = to;
  const std::size_t rows = a.value().numel() / static_cast<std::size_t>(t);
  Tensor out(shape);
  for (std::size_t r = 0; r < rows; ++r)
    std::copy_n(a.value().data() + r * t, static_cast<std::size_t>(to),
                out.data() + r * to);
  return Variable::op(std::move(out), {a}, [t, to, rows](VarNode& self) {
    Tensor ga(self.parents[0]->value.shape());
    for (std::size_t r = 0; r < rows; ++r)
      std::copy_n(self.grad.data() + r * to, static_cast<std::size_t>(to),
                  ga.data() + r * t);
    self.parents[0]->accumulate(ga);
  });
}

Variable stack_time(const std::vector<Variable>& steps) {
  require(!steps.empty(), "stack_time: empty");
  const Tensor& first = steps[0].value();
  require(first.ndim() == 2, "stack_time: steps must be [b x d]");
  const int b = first.dim(0), d = first.dim(1);
  const int t_len = static_cast<int>(steps.size());
  for (const auto& s : steps)
    require(s.value().same_shape(first), "stack_time: step shape mismatch");
  Tensor out({b, d, t_len});
  for (int t = 0; t < t_len; ++t) {
    const Tensor& sv = steps[static_cast<std::size_t>(t)].value();
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < d; ++j)
        out[(static_cast<std::size_t>(i) * d + j) * t_len + t] =
            sv[static_cast<std::size_t>(i) * d + j];
  }
  return Variable::op(std::move(out), steps, [b, d, t_len](VarNode& self) {
    for (int t = 0; t < t_len; ++t) {
      auto& p = self.parents[static_cast<std::size_t>(t)];
      if (!p->requires_grad) continue;
      Tensor gp({b, d});
      for (int i = 0; i < b; ++i)
        for (int j = 0; j < d; ++j)
          gp[static_cast<std::size_t>(i) * d + j] =
              self.grad[(static_cast<std::size_t>(i) * d + j) * t_len + t];
      p->accumulate(gp);
    }
  });
}

Variable pad_last(const Variable& a, int to) {
  const Tensor& av = a.value();
  require(av.ndim() >= 1, "pad_last: rank");
  const int t_len = av.dim(av.ndim() - 1);
  require(to >= t_len, "pad_last: target shorter than input");
  if (to == t_len) return a;
  std::vector<int> shape = av.shape();
  shape.back() = to;
  const std::size_t rows = av.numel() / static_cast<std::size_t>(t_len);
  Tensor out(shape, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    for (int t = 0; t < t_len; ++t)
      out[r * to + t] = av[r * t_len + t];
  return Variable::op(std::move(out), {a}, [rows, t_len, to](VarNode& self) {
    auto& p = self.parents[0];
    if (!p->requires_grad) return;
    Tensor gp(p->value.shape());
    for (std::size_t r = 0; r < rows; ++r)
      for (int t = 0; t < t_len; ++t)
        gp[r * t_len + t] = self.grad[r * static_cast<std::size_t>(to) + t];
    p->accumulate(gp);
  });
}

Variable stack_batch(const std::vector<Variable>& items) {
  require(!items.empty(), "stack_batch: empty");
  const Tensor& first = items[0].value();
  for (const auto& it : items)
    require(it.value().same_shape(first), "stack_batch: shape mismatch");
  std::vector<int> shape{static_cast<int>(items.size())};
  shape.insert(shape.end(), first.shape().begin(), first.shape().end());
  const std::size_t stride = first.numel();
  Tensor out(shape);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Tensor& v = items[i].value();
    std::copy_n(v.data(), stride, out.data() + i * stride);
  }
  return Variable::op(std::move(out), items, [stride](VarNode& self) {
    for (std::size_t i = 0; i < self.parents.size(); ++i) {
      auto& p = self.parents[i];
      if (!p->requires_grad) continue;
      Tensor gp(p->value.shape());
      std::copy_n(self.grad.data() + i * stride, stride, gp.data());
      p->accumulate(gp);
    }
  });
}

Variable mask_last(const Variable& a, const std::vector<int>& valid) {
  const Tensor& av = a.value();
  require(av.ndim() >= 2, "mask_last: rank");
  const int b = av.dim(0);
  const int t_len = av.dim(av.ndim() - 1);
  require(static_cast<int>(valid.size()) == b, "mask_last: valid size");
  for (int v : valid)
    require(0 <= v && v <= t_len, "mask_last: valid out of range");
  const std::size_t item = av.numel() / static_cast<std::size_t>(b);
  const std::size_t rows_per_item = item / static_cast<std::size_t>(t_len);
  Tensor out = av;
  for (int i = 0; i < b; ++i) {
    const int v = valid[static_cast<std::size_t>(i)];
    double* base = out.data() + static_cast<std::size_t>(i) * item;
    for (std::size_t r = 0; r < rows_per_item; ++r)
      for (int t = v; t < t_len; ++t) base[r * t_len + t] = 0.0;
  }
  const std::vector<int> bound = valid;
  return Variable::op(
      std::move(out), {a},
      [b, item, rows_per_item, t_len, bound](VarNode& self) {
        auto& p = self.parents[0];
        if (!p->requires_grad) return;
        Tensor gp = self.grad;
        for (int i = 0; i < b; ++i) {
          const int v = bound[static_cast<std::size_t>(i)];
          double* base = gp.data() + static_cast<std::size_t>(i) * item;
          for (std::size_t r = 0; r < rows_per_item; ++r)
            for (int t = v; t < t_len; ++t) base[r * t_len + t] = 0.0;
        }
        p->accumulate(gp);
      });
}

Variable select_time(const Variable& a, int t) {
  require(a.value().ndim() == 3, "select_time: rank");
  const int b = a.value().dim(0), d = a.value().dim(1),
            t_len = a.value().dim(2);
  require(0 <= t && t < t_len, "select_time: index out of range");
  Tensor out({b, d});
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < d; ++j)
      out[static_cast<std::size_t>(i) * d + j] =
          a.value()[(static_cast<std::size_t>(i) * d + j) * t_len + t];
  return Variable::op(std::move(out), {a}, [b, d, t_len, t](VarNode& self) {
    Tensor ga(self.parents[0]->value.shape());
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < d; ++j)
        ga[(static_cast<std::size_t>(i) * d + j) * t_len + t] =
            self.grad[static_cast<std::size_t>(i) * d + j];
    self.parents[0]->accumulate(ga);
  });
}

namespace {

struct Conv2dDims {
  int b, c, h, w, o, kh, kw, sh, sw, ph, pw, oh, ow;
  std::size_t col_rows() const {
    return static_cast<std::size_t>(c) * kh * kw;
  }
  std::size_t col_cols() const { return static_cast<std::size_t>(oh) * ow; }
};

void im2col(const double* x, const Conv2dDims& d, double* col) {
  // col[(c*kh+ki)*kw+kj][out_pos] = x[c][ih][iw] with zero padding.
  for (int c = 0; c < d.c; ++c) {
    for (int ki = 0; ki < d.kh; ++ki) {
      for (int kj = 0; kj < d.kw; ++kj) {
        double* row = col + ((static_cast<std::size_t>(c) * d.kh + ki) * d.kw +
                             kj) * d.col_cols();
        for (int i = 0; i < d.oh; ++i) {
          const int ih = i * d.sh - d.ph + ki;
          if (ih < 0 || ih >= d.h) {
            std::fill_n(row + static_cast<std::size_t>(i) * d.ow, d.ow, 0.0);
            continue;
          }
          const double* src =
              x + (static_cast<std::size_t>(c) * d.h + ih) * d.w;
          for (int j = 0; j < d.ow; ++j) {
            const int iw = j * d.sw - d.pw + kj;
            row[static_cast<std::size_t>(i) * d.ow + j] =
                (iw >= 0 && iw < d.w) ? src[iw] : 0.0;
          }
        }
      }
    }
  }
}

void col2im_add(const double* col, const Conv2dDims& d, double* gx) {
  for (int c = 0; c < d.c; ++c) {
    for (int ki = 0; ki < d.kh; ++ki) {
      for (int kj = 0; kj < d.kw; ++kj) {
        const double* row =
            col + ((static_cast<std::size_t>(c) * d.kh + ki) * d.kw + kj) *
                      d.col_cols();
        for (int i = 0; i < d.oh; ++i) {
          const int ih = i * d.sh - d.ph + ki;
          if (ih < 0 || ih >= d.h) continue;
          double* dst = gx + (static_cast<std::size_t>(c) * d.h + ih) * d.w;
          for (int j = 0; j < d.ow; ++j) {
            const int iw = j * d.sw - d.pw + kj;
            if (iw >= 0 && iw < d.w)
              dst[iw] += row[static_cast<std::size_t>(i) * d.ow + j];
          }
        }
      }
    }
  }
}

Variable conv2d_impl(const Variable& x, const Variable& w,
                     const Variable& bias, Conv2dDims d) {
  d.oh = (d.h + 2 * d.ph - d.kh) / d.sh + 1;
  d.ow = (d.w + 2 * d.pw - d.kw) / d.sw + 1;
  require(d.oh > 0 && d.ow > 0, "conv: output collapses to zero extent");

  Tensor out({d.b, d.o, d.oh, d.ow});
  const std::size_t xs = static_cast<std::size_t>(d.c) * d.h * d.w;
  const std::size_t os = static_cast<std::size_t>(d.o) * d.oh * d.ow;
  std::vector<double> col(d.col_rows() * d.col_cols());
  CMap wm(w.value().data(), d.o, static_cast<int>(d.col_rows()));
  for (int i = 0; i < d.b; ++i) {
    im2col(x.value().data() + i * xs, d, col.data());
    Map om(out.data() + i * os, d.o, static_cast<int>(d.col_cols()));
    om = wm * CMap(col.data(), static_cast<int>(d.col_rows()),
                   static_cast<int>(d.col_cols()));
    om.colwise() +=
        Eigen::Map<const Eigen::VectorXd>(bias.value().data(), d.o);
  }

  return Variable::op(std::move(out), {x, w, bias}, [d, xs, os](VarNode& self) {
    const Tensor& xv = self.parents[0]->value;
    const Tensor& wv = self.parents[1]->value;
    const int cr = static_cast<int>(d.col_rows());
    const int cc = static_cast<int>(d.col_cols());
    // The unfolding buffer is recomputed rather than saved; at desk scale
    // recompute is cheaper than holding every conv's buffer alive.
    std::vector<double> col(d.col_rows() * d.col_cols());
    Tensor gw({d.o, d.c, d.kh, d.kw});
    Tensor gx(xv.shape());
    Tensor gb({d.o});
    Eigen::Map<Eigen::VectorXd> gbm(gb.data(), d.o);
    const bool need_x = self.parents[0]->requires_grad;
    const bool need_w = self.parents[1]->requires_grad;
    const bool need_b = self.parents[2]->requires_grad;
    std::vector<double> gcol(need_x ? col.size() : 0);
    for (int i = 0; i < d.b; ++i) {
      CMap g(self.grad.data() + i * os, d.o, cc);
      if (need_w || need_x) im2col(xv.data() + i * xs, d, col.data());
      if (need_w)
        Map(gw.data(), d.o, cr).noalias() += g * CMap(col.data(), cr, cc).transpose();
      if (need_b) gbm.noalias() += g.rowwise().sum();
      if (need_x) {
        Map(gcol.data(), cr, cc).noalias() =
            CMap(wv.data(), d.o, cr).transpose() * g;
        col2im_add(gcol.data(), d, gx.data() + i * xs);
      }
    }
    if (need_x) self.parents[0]->accumulate(gx);
    if (need_w) self.parents[1]->accumulate(gw);
    if (need_b) self.parents[2]->accumulate(gb);
  });
}

}  // namespace

Variable conv2d(const Variable& x, const Variable& w, const Variable& bias,
                int stride_h, int stride_w, int pad_h, int pad_w) {
  require(x.value().ndim() == 4, "conv2d: input must be [b x c x h x w]");
  require(w.value().ndim() == 4, "conv2d: weight must be [o x c x kh x kw]");
  Conv2dDims d{};
  d.b = x.value().dim(0);
  d.c = x.value().dim(1);
  d.h = x.value().dim(2);
  d.w = x.value().dim(3);
  d.o = w.value().dim(0);
  d.kh = w.value().dim(2);
  d.kw = w.value().dim(3);
  d.sh = stride_h;
  d.sw = stride_w;
  d.ph = pad_h;
  d.pw = pad_w;
  require(w.value().dim(1) == d.c, "conv2d: channel mismatch");
  require(bias.value().numel() == static_cast<std::size_t>(d.o),
          "conv2d: bias length mismatch");
  require(d.sh > 0 && d.sw > 0, "conv2d: stride must be positive");
  return conv2d_impl(x, w, bias, d);
}

Variable conv1d(const Variable& x, const Variable& w, const Variable& bias,
                int stride, int pad) {
  require(x.value().ndim() == 3, "conv1d: input must be [b x c x l]");
  require(w.value().ndim() == 3, "conv1d: weight must be [o x c x k]");
  // 1-D convolution is 2-D convolution with a unit height.
  const auto& xs = x.value().shape();
  const auto& ws = w.value().shape();
  Variable x4 = reshape(x, {xs[0], xs[1], 1, xs[2]});
  Variable w4 = reshape(w, {ws[0], ws[1], 1, ws[2]});
  Variable y4 = conv2d(x4, w4, bias, 1, stride, 0, pad);
  const auto& ys = y4.value().shape();
  return reshape(y4, {ys[0], ys[1], ys[3]});
}

Variable max_pool2d(const Variable& x, int kh, int kw) {
  require(x.value().ndim() == 4, "max_pool2d: rank");
  require(kh > 0 && kw > 0, "max_pool2d: kernel");
  const int b = x.value().dim(0), c = x.value().dim(1), h = x.value().dim(2),
            w = x.value().dim(3);
  const int oh = h / kh, ow = w / kw;
  require(oh > 0 && ow > 0, "max_pool2d: input smaller than kernel");
  Tensor out({b, c, oh, ow});
  auto idx = std::make_shared<std::vector<std::size_t>>(out.numel());
  const double* xp = x.value().data();
  std::size_t o = 0;
  for (int i = 0; i < b; ++i) {
    for (int ch = 0; ch < c; ++ch) {
      const std::size_t base = (static_cast<std::size_t>(i) * c + ch) *
                               static_cast<std::size_t>(h) * w;
      for (int ph = 0; ph < oh; ++ph) {
        for (int pw = 0; pw < ow; ++pw, ++o) {
          std::size_t best = base + static_cast<std::size_t>(ph * kh) * w +
                             static_cast<std::size_t>(pw) * kw;
          double bv = xp[best];
          for (int di = 0; di < kh; ++di) {
            for (int dj = 0; dj < kw; ++dj) {
              const std::size_t at =
                  base + static_cast<std::size_t>(ph * kh + di) * w +
                  static_cast<std::size_t>(pw * kw + dj);
              if (xp[at] > bv) {
                bv = xp[at];
                best = at;
              }
            }
          }
          out[o] = bv;
          (*idx)[o] = best;
        }
      }
    }
  }
  return Variable::op(std::move(out), {x}, [idx](VarNode& self) {
    Tensor ga(self.parents[0]->value.shape());
    for (std::size_t i = 0; i < self.grad.numel(); ++i)
      ga[(*idx)[i]] += self.grad[i];
    self.parents[0]->accumulate(ga);
  });
}

Variable max_pool1d(const Variable& x, int k) {
  require(x.value().ndim() == 3, "max_pool1d: rank");
  const auto& xs = x.value().shape();
  Variable x4 = reshape(x, {xs[0], xs[1], 1, xs[2]});
  Variable y4 = max_pool2d(x4, 1, k);
  const auto& ys = y4.value().shape();
  return reshape(y4, {ys[0], ys[1], ys[3]});
}

Variable global_avg_pool(const Variable& x) {
  int b, c;
  std::size_t rest;
  split_bc_rest(x.value(), b, c, rest, "global_avg_pool: rank");
  require(rest > 0, "global_avg_pool: empty spatial extent");
  Tensor out({b, c});
  for (int i = 0; i < b; ++i) {
    for (int ch = 0; ch < c; ++ch) {
      const double* src =
          x.value().data() + (static_cast<std::size_t>(i) * c + ch) * rest;
      double s = 0.0;
      for (std::size_t j = 0; j < rest; ++j) s += src[j];
      out[static_cast<std::size_t>(i) * c + ch] =
          s / static_cast<double>(rest);
    }
  }
  return Variable::op(std::move(out), {x}, [b, c, rest](VarNode& self) {
    Tensor ga(self.parents[0]->value.shape());
    for (int i = 0; i < b; ++i) {
      for (int ch = 0; ch < c; ++ch) {
        const double g =
            self.grad[static_cast<std::size_t>(i) * c + ch] /
            static_cast<double>(rest);
        double* dst =
            ga.data() + (static_cast<std::size_t>(i) * c + ch) * rest;
        for (std::size_t j = 0; j < rest; ++j) dst[j] = g;
      }
    }
    self.parents[0]->accumulate(ga);
  });
}

Variable masked_global_avg_pool(const Variable& x,
                                const std::vector<int>& valid) {
  const Tensor& xv = x.value();
  require(xv.ndim() == 3 || xv.ndim() == 4, "masked_global_avg_pool: rank");
  const int b = xv.dim(0), c = xv.dim(1);
  const int h = xv.ndim() == 4 ? xv.dim(2) : 1;
  const int w = xv.dim(xv.ndim() - 1);
  require(static_cast<int>(valid.size()) == b,
          "masked_global_avg_pool: valid length mismatch");
  for (int v : valid)
    require(v >= 1 && v <= w, "masked_global_avg_pool: valid out of range");

  Tensor out({b, c});
  for (int i = 0; i < b; ++i) {
    const int vw = valid[static_cast<std::size_t>(i)];
    const double count = static_cast<double>(h) * vw;
    for (int ch = 0; ch < c; ++ch) {
      const double* src = xv.data() + ((static_cast<std::size_t>(i) * c + ch) *
                                       h) * w;
      double s = 0.0;
      for (int r = 0; r < h; ++r)
        for (int j = 0; j < vw; ++j)
          s += src[static_cast<std::size_t>(r) * w + j];
      out[static_cast<std::size_t>(i) * c + ch] = s / count;
    }
  }
  return Variable::op(std::move(out), {x}, [b, c, h, w, valid](VarNode& self) {
    Tensor ga(self.parents[0]->value.shape());
    for (int i = 0; i < b; ++i) {
      const int vw = valid[static_cast<std::size_t>(i)];
      const double count = static_cast<double>(h) * vw;
      for (int ch = 0; ch < c; ++ch) {
        const double g =
            self.grad[static_cast<std::size_t>(i) * c + ch] / count;
        double* dst =
            ga.data() + ((static_cast<std::size_t>(i) * c + ch) * h) * w;
        for (int r = 0; r < h; ++r)
          for (int j = 0; j < vw; ++j)
            dst[static_cast<std::size_t>(r) * w + j] = g;
      }
    }
    self.parents[0]->accumulate(ga);
  });
}

Variable batch_norm(const Variable& x, const Variable& gamma,
                    const Variable& beta, Tensor& running_mean,
                    Tensor& running_var, bool training, double momentum,
                    double eps, const std::vector<int>* valid) {
  const Tensor& xv = x.value();
  require(xv.ndim() >= 2, "batch_norm: rank");
  const int b = xv.dim(0), c = xv.dim(1);
  const int w = xv.dim(xv.ndim() - 1);
  const std::size_t spatial = xv.numel() / (static_cast<std::size_t>(b) * c);
  const std::size_t inner = spatial / static_cast<std::size_t>(w);
  require(gamma.value().numel() == static_cast<std::size_t>(c) &&
              beta.value().numel() == static_cast<std::size_t>(c),
          "batch_norm: affine length mismatch");
  require(running_mean.numel() == static_cast<std::size_t>(c) &&
              running_var.numel() == static_cast<std::size_t>(c),
          "batch_norm: running stat length mismatch");
  if (valid) {
    require(static_cast<int>(valid->size()) == b,
            "batch_norm: valid length mismatch");
    for (int v : *valid) require(v >= 1 && v <= w, "batch_norm: valid range");
  }

  // Per-position coefficient: 1 when inside the valid region, else 0.
  auto covered = [&](int item, std::size_t pos) {
    if (!valid) return true;
    return static_cast<int>(pos % static_cast<std::size_t>(w)) <
           (*valid)[static_cast<std::size_t>(item)];
  };

  std::vector<double> mu(static_cast<std::size_t>(c)),
      var(static_cast<std::size_t>(c));
  double count = 0.0;
  if (training) {
    for (int ch = 0; ch < c; ++ch) {
      double s = 0.0, s2 = 0.0;
      double n = 0.0;
      for (int i = 0; i < b; ++i) {
        const double* src =
            xv.data() + (static_cast<std::size_t>(i) * c + ch) * spatial;
        for (std::size_t j = 0; j < spatial; ++j) {
          if (!covered(i, j)) continue;
          s += src[j];
          s2 += src[j] * src[j];
          n += 1.0;
        }
      }
      require(n > 0.0, "batch_norm: empty statistics");
      mu[static_cast<std::size_t>(ch)] = s / n;
      var[static_cast<std::size_t>(ch)] =
          std::max(0.0, s2 / n - (s / n) * (s / n));
      count = n;
      running_mean[static_cast<std::size_t>(ch)] =
          (1.0 - momentum) * running_mean[static_cast<std::size_t>(ch)] +
          momentum * mu[static_cast<std::size_t>(ch)];
      running_var[static_cast<std::size_t>(ch)] =
          (1.0 - momentum) * running_var[static_cast<std::size_t>(ch)] +
          momentum * var[static_cast<std::size_t>(ch)];
    }
  } else {
    for (int ch = 0; ch < c; ++ch) {
      mu[static_cast<std::size_t>(ch)] =
          running_mean[static_cast<std::size_t>(ch)];
      var[static_cast<std::size_t>(ch)] =
          running_var[static_cast<std::size_t>(ch)];
    }
  }

  Tensor out(xv.shape());
  for (int i = 0; i < b; ++i) {
    for (int ch = 0; ch < c; ++ch) {
      const double inv =
          1.0 / std::sqrt(var[static_cast<std::size_t>(ch)] + eps);
      const double g = gamma.value()[static_cast<std::size_t>(ch)];
      const double bt = beta.value()[static_cast<std::size_t>(ch)];
      const double m = mu[static_cast<std::size_t>(ch)];
      const std::size_t off = (static_cast<std::size_t>(i) * c + ch) * spatial;
      for (std::size_t j = 0; j < spatial; ++j)
        out[off + j] = g * (xv[off + j] - m) * inv + bt;
    }
  }

  std::vector<int> valid_copy = valid ? *valid : std::vector<int>();
  const bool use_mask = valid != nullptr;
  return Variable::op(
      std::move(out), {x, gamma, beta},
      [b, c, w, spatial, inner, mu, var, eps, training, count, use_mask,
       valid_copy](VarNode& self) {
        (void)inner;
        const Tensor& xv2 = self.parents[0]->value;
        const Tensor& gam = self.parents[1]->value;
        auto covered2 = [&](int item, std::size_t pos) {
          if (!use_mask) return true;
          return static_cast<int>(pos % static_cast<std::size_t>(w)) <
                 valid_copy[static_cast<std::size_t>(item)];
        };
        Tensor gx(xv2.shape());
        Tensor gg({c});
        Tensor gb({c});
        for (int ch = 0; ch < c; ++ch) {
          const double m = mu[static_cast<std::size_t>(ch)];
          const double inv =
              1.0 / std::sqrt(var[static_cast<std::size_t>(ch)] + eps);
          const double gv = gam[static_cast<std::size_t>(ch)];
          // Every output position uses gamma, beta and the shared statistics,
          // padded or not, so these sums run over the whole extent.
          double sum_g = 0.0, sum_gx = 0.0;
          for (int i = 0; i < b; ++i) {
            const std::size_t off =
                (static_cast<std::size_t>(i) * c + ch) * spatial;
            for (std::size_t j = 0; j < spatial; ++j) {
              const double gout = self.grad[off + j];
              const double xhat = (xv2[off + j] - m) * inv;
              sum_g += gout;
              sum_gx += gout * xhat;
              gg[static_cast<std::size_t>(ch)] += gout * xhat;
              gb[static_cast<std::size_t>(ch)] += gout;
            }
          }
          if (self.parents[0]->requires_grad) {
            for (int i = 0; i < b; ++i) {
              const std::size_t off =
                  (static_cast<std::size_t>(i) * c + ch) * spatial;
              for (std::size_t j = 0; j < spatial; ++j) {
                const double gout = self.grad[off + j];
                gx[off + j] = gv * inv * gout;
                // Positions inside the statistics also feel the mean and
                // variance shifting with them.
                if (training && covered2(i, j)) {
                  const double xhat = (xv2[off + j] - m) * inv;
                  gx[off + j] -=
                      gv * inv * (sum_g / count + xhat * sum_gx / count);
                }
              }
            }
          }
        }
        if (self.parents[0]->requires_grad)
          self.parents[0]->accumulate(gx);
        self.parents[1]->accumulate(gg);
        self.parents[2]->accumulate(gb);
      });
}

Variable layer_norm(const Variable& x, const Variable& gamma,
                    const Variable& beta, double eps) {
  const Tensor& xv = x.value();
  require(xv.ndim() == 2, "layer_norm: input must be [n x d]");
  const int n = xv.dim(0), d = xv.dim(1);
  require(gamma.value().numel() == static_cast<std::size_t>(d) &&
              beta.value().numel() == static_cast<std::size_t>(d),
          "layer_norm: affine length mismatch");

  auto mu = std::make_shared<std::vector<double>>(static_cast<std::size_t>(n));
  auto inv = std::make_shared<std::vector<double>>(static_cast<std::size_t>(n));
  Tensor out(xv.shape());
  for (int i = 0; i < n; ++i) {
    const double* row = xv.data() + static_cast<std::size_t>(i) * d;
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += row[j];
    const double m = s / d;
    double v = 0.0;
    for (int j = 0; j < d; ++j) v += (row[j] - m) * (row[j] - m);
    v /= d;
    (*mu)[static_cast<std::size_t>(i)] = m;
    (*inv)[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(v + eps);
    for (int j = 0; j < d; ++j)
      out[static_cast<std::size_t>(i) * d + j] =
          gamma.value()[static_cast<std::size_t>(j)] * (row[j] - m) *
              (*inv)[static_cast<std::size_t>(i)] +
          beta.value()[static_cast<std::size_t>(j)];
  }
  return Variable::op(std::move(out), {x, gamma, beta},
                      [n, d, mu, inv](VarNode& self) {
    const Tensor& xv2 = self.parents[0]->value;
    const Tensor& gam = self.parents[1]->value;
    Tensor gx(xv2.shape());
    Tensor gg({d});
    Tensor gb({d});
    for (int i = 0; i < n; ++i) {
      const double m = (*mu)[static_cast<std::size_t>(i)];
      const double iv = (*inv)[static_cast<std::size_t>(i)];
      const double* row = xv2.data() + static_cast<std::size_t>(i) * d;
      const double* g = self.grad.data() + static_cast<std::size_t>(i) * d;
      double sum_g = 0.0, sum_gx = 0.0;
      for (int j = 0; j < d; ++j) {
        const double xhat = (row[j] - m) * iv;
        const double gj = g[j] * gam[static_cast<std::size_t>(j)];
        sum_g += gj;
        sum_gx += gj * xhat;
        gg[static_cast<std::size_t>(j)] += g[j] * xhat;
        gb[static_cast<std::size_t>(j)] += g[j];
      }
      if (self.parents[0]->requires_grad) {
        for (int j = 0; j < d; ++j) {
          const double xhat = (row[j] - m) * iv;
          const double gj = g[j] * gam[static_cast<std::size_t>(j)];
          gx[static_cast<std::size_t>(i) * d + j] =
              iv * (gj - sum_g / d - xhat * sum_gx / d);
        }
      }
    }
    if (self.parents[0]->requires_grad) self.parents[0]->accumulate(gx);
    self.parents[1]->accumulate(gg);
    self.parents[2]->accumulate(gb);
  });
}

Variable dropout(const Variable& x, double p, bool training, tandem::Rng& rng) {
  require(p >= 0.0 && p < 1.0, "dropout: p must be in [0, 1)");
  if (!training || p == 0.0) return x;
  const double keep = 1.0 - p;
  auto mask = std::make_shared<std::vector<double>>(x.value().numel());
  Tensor out(x.value().shape());
  for (std::size_t i = 0; i < out.numel(); ++i) {
    const double m = rng.uniform() < p ? 0.0 : 1.0 / keep;
    (*mask)[i] = m;
    out[i] = x.value()[i] * m;
  }
  return Variable::op(std::move(out), {x}, [mask](VarNode& self) {
    Tensor ga(self.grad.shape());
    for (std::size_t i = 0; i < ga.numel(); ++i)
      ga[i] = self.grad[i] * (*mask)[i];
    self.parents[0]->accumulate(ga);
  });
}

Variable reflect_pad_freq(const Variable& x, int target_f) {
  const Tensor& xv = x.value();
  require(xv.ndim() == 4, "reflect_pad_freq: rank");
  const int b = xv.dim(0), c = xv.dim(1), f = xv.dim(2), t = xv.dim(3);
  require(target_f >= f, "reflect_pad_freq: target smaller than input");
  const int extra = target_f - f;
  require(extra <= f - 1, "reflect_pad_freq: padding exceeds reflectable extent");
  if (extra == 0) return x;
  Tensor out({b, c, target_f, t});
  for (int i = 0; i < b; ++i) {
    for (int ch = 0; ch < c; ++ch) {
      const double* src =
          xv.data() + (static_cast<std::size_t>(i) * c + ch) *
                          static_cast<std::size_t>(f) * t;
      double* dst = out.data() + (static_cast<std::size_t>(i) * c + ch) *
                                     static_cast<std::size_t>(target_f) * t;
      std::copy_n(src, static_cast<std::size_t>(f) * t, dst);
      for (int e = 0; e < extra; ++e) {
        const int mirror = f - 2 - e;  // reflection without edge repeat
        std::copy_n(src + static_cast<std::size_t>(mirror) * t,
                    static_cast<std::size_t>(t),
                    dst + static_cast<std::size_t>(f + e) * t);
      }
    }
  }
  return Variable::op(std::move(out), {x},
                      [b, c, f, t, extra](VarNode& self) {
    Tensor ga(self.parents[0]->value.shape());
    const int target = f + extra;
    for (int i = 0; i < b; ++i) {
      for (int ch = 0; ch < c; ++ch) {
        const double* g =
            self.grad.data() + (static_cast<std::size_t>(i) * c + ch) *
                                   static_cast<std::size_t>(target) * t;
        double* dst = ga.data() + (static_cast<std::size_t>(i) * c + ch) *
                                      static_cast<std::size_t>(f) * t;
        for (int r = 0; r < f; ++r)
          for (int j = 0; j < t; ++j)
            dst[static_cast<std::size_t>(r) * t + j] +=
                g[static_cast<std::size_t>(r) * t + j];
        for (int e = 0; e < extra; ++e) {
          const int mirror = f - 2 - e;
          for (int j = 0; j < t; ++j)
            dst[static_cast<std::size_t>(mirror) * t + j] +=
                g[static_cast<std::size_t>(f + e) * t + j];
        }
      }
    }
    self.parents[0]->accumulate(ga);
  });
}

Variable crop_freq(const Variable& x, int target_f) {
  const Tensor& xv = x.value();
  require(xv.ndim() == 4, "crop_freq: rank");
  const int b = xv.dim(0), c = xv.dim(1), f = xv.dim(2), t = xv.dim(3);
  require(0 < target_f && target_f <= f, "crop_freq: bad target");
  if (target_f == f) return x;
  Tensor out({b, c, target_f, t});
  for (int i = 0; i < b; ++i)
    for (int ch = 0; ch < c; ++ch)
      std::copy_n(xv.data() + (static_cast<std::size_t>(i) * c + ch) *
                                  static_cast<std::size_t>(f) * t,
                  static_cast<std::size_t>(target_f) * t,
                  out.data() + (static_cast<std::size_t>(i) * c + ch) *
                                   static_cast<std::size_t>(target_f) * t);
  return Variable::op(std::move(out), {x}, [b, c, f, t, target_f](VarNode& self) {
    Tensor ga(self.parents[0]->value.shape());
    for (int i = 0; i < b; ++i)
      for (int ch = 0; ch < c; ++ch)
        std::copy_n(self.grad.data() +
                        (static_cast<std::size_t>(i) * c + ch) *
                            static_cast<std::size_t>(target_f) * t,
                    static_cast<std::size_t>(target_f) * t,
                    ga.data() + (static_cast<std::size_t>(i) * c + ch) *
                                    static_cast<std::size_t>(f) * t);
    self.parents[0]->accumulate(ga);
  });
}

Variable upsample_freq2(const Variable& x) {
  const Tensor& xv = x.value();
  require(xv.ndim() == 4, "upsample_freq2: rank");
  const int b = xv.dim(0), c = xv.dim(1), f = xv.dim(2), t = xv.dim(3);
  Tensor out({b, c, 2 * f, t});
  for (int i = 0; i < b; ++i) {
    for (int ch = 0; ch < c; ++ch) {
      const double* src =
          xv.data() + (static_cast<std::size_t>(i) * c + ch) *
                          static_cast<std::size_t>(f) * t;
      double* dst = out.data() + (static_cast<std::size_t>(i) * c + ch) *
                                     static_cast<std::size_t>(2 * f) * t;
      for (int r = 0; r < f; ++r) {
        std::copy_n(src + static_cast<std::size_t>(r) * t,
                    static_cast<std::size_t>(t),
                    dst + static_cast<std::size_t>(2 * r) * t);
        std::copy_n(src + static_cast<std::size_t>(r) * t,
                    static_cast<std::size_t>(t),
                    dst + static_cast<std::size_t>(2 * r + 1) * t);
      }
    }
  }
  return Variable::op(std::move(out), {x}, [b, c, f, t](VarNode& self) {
    Tensor ga(self.parents[0]->value.shape());
    for (int i = 0; i < b; ++i) {
      for (int ch = 0; ch < c; ++ch) {
        const double* g =
            self.grad.data() + (static_cast<std::size_t>(i) * c + ch) *
                                   static_cast<std::size_t>(2 * f) * t;
        double* dst = ga.data() + (static_cast<std::size_t>(i) * c + ch) *
                                      static_cast<std::size_t>(f) * t;
        for (int r = 0; r < f; ++r)
          for (int j = 0; j < t; ++j)
            dst[static_cast<std::size_t>(r) * t + j] =
                g[static_cast<std::size_t>(2 * r) * t + j] +
                g[static_cast<std::size_t>(2 * r + 1) * t + j];
      }
    }
    self.parents[0]->accumulate(ga);
  });
}

Variable masked_update(const Variable& a, const Variable& b,
                       const std::vector<double>& item_mask) {
  require_same_shape(a, b, "masked_update");
  const Tensor& av = a.value();
  require(av.ndim() == 2, "masked_update: rank");
  const int n = av.dim(0), d = av.dim(1);
  require(static_cast<int>(item_mask.size()) == n,
          "masked_update: mask length mismatch");
  Tensor out(av.shape());
  for (int i = 0; i < n; ++i) {
    const double m = item_mask[static_cast<std::size_t>(i)];
    for (int j = 0; j < d; ++j) {
      const std::size_t at = static_cast<std::size_t>(i) * d + j;
      out[at] = m * av[at] + (1.0 - m) * b.value()[at];
    }
  }
  return Variable::op(std::move(out), {a, b}, [n, d, item_mask](VarNode& self) {
    for (int side = 0; side < 2; ++side) {
      auto& p = self.parents[static_cast<std::size_t>(side)];
      if (!p->requires_grad) continue;
      Tensor gp(p->value.shape());
      for (int i = 0; i < n; ++i) {
        const double m = item_mask[static_cast<std::size_t>(i)];
        const double coeff = side == 0 ? m : 1.0 - m;
        for (int j = 0; j < d; ++j) {
          const std::size_t at = static_cast<std::size_t>(i) * d + j;
          gp[at] = coeff * self.grad[at];
        }
      }
      p->accumulate(gp);
    }
  });
}

Variable cross_entropy_per_row(const Variable& logits,
                               const std::vector<int>& targets) {
  const Tensor& z = logits.value();
  require(z.ndim() == 2, "cross_entropy: logits must be [n x k]");
  const int n = z.dim(0), k = z.dim(1);
  require(static_cast<int>(targets.size()) == n,
          "cross_entropy: target count mismatch");
  for (int t : targets)
    require(0 <= t && t < k, "cross_entropy: target out of range");

  auto probs = std::make_shared<std::vector<double>>(z.numel());
  Tensor out({n});
  for (int i = 0; i < n; ++i) {
    const double* row = z.data() + static_cast<std::size_t>(i) * k;
    double mx = row[0];
    for (int j = 1; j < k; ++j) mx = std::max(mx, row[j]);
    double denom = 0.0;
    for (int j = 0; j < k; ++j) denom += std::exp(row[j] - mx);
    const double logz = mx + std::log(denom);
    for (int j = 0; j < k; ++j)
      (*probs)[static_cast<std::size_t>(i) * k + j] =
          std::exp(row[j] - logz);
    out[static_cast<std::size_t>(i)] =
        logz - row[targets[static_cast<std::size_t>(i)]];
  }
  return Variable::op(std::move(out), {logits},
                      [n, k, targets, probs](VarNode& self) {
    Tensor gz(self.parents[0]->value.shape());
    for (int i = 0; i < n; ++i) {
      const double g = self.grad[static_cast<std::size_t>(i)];
      for (int j = 0; j < k; ++j)
        gz[static_cast<std::size_t>(i) * k + j] =
            g * (*probs)[static_cast<std::size_t>(i) * k + j];
      gz[static_cast<std::size_t>(i) * k +
         targets[static_cast<std::size_t>(i)]] -= g;
    }
    self.parents[0]->accumulate(gz);
  });
}

}  // namespace tandem::nn
