// Copyright 2026 The hrdiff Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hrdiff/ops.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hrdiff {
namespace {

using internal::Node;
using NodePtr = std::shared_ptr<Node>;

[[noreturn]] void ShapeError(const char* op, const Shape& a, const Shape& b) {
  throw std::invalid_argument(std::string(op) + ": incompatible shapes " +
                              ShapeString(a) + " and " + ShapeString(b));
}

// Builds the result node; history is kept only when some parent needs it.
Tensor Make(Shape shape, std::vector<double> value, std::vector<NodePtr> parents,
            std::function<void(Node&)> backward) {
  auto node = std::make_shared<Node>();
  node->shape = shape;
  node->value = std::move(value);
  bool needs = false;
  if (GradEnabled()) {
    for (const auto& p : parents) needs = needs || p->requires_grad;
  }
  if (needs) {
    node->requires_grad = true;
    node->parents = std::move(parents);
    node->backward = std::move(backward);
  }
  return Tensor::FromNode(std::move(node));
}

// Gradient buffer of a parent, or nullptr if it does not need one.
double* GradOf(const NodePtr& p) {
  if (!p->requires_grad) return nullptr;
  p->EnsureGrad();
  return p->grad.data();
}

void RequireSame(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) ShapeError(op, a.shape(), b.shape());
}

void RequireScalar(const char* op, const Tensor& a, const Tensor& s) {
  if (s.shape() != Shape{1, 1}) ShapeError(op, a.shape(), s.shape());
}

void RequireRow(const char* op, const Tensor& a, const Tensor& row) {
  if (row.rows() != 1 || row.cols() != a.cols()) ShapeError(op, a.shape(), row.shape());
}

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace

Tensor MatMul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) ShapeError("MatMul", a.shape(), b.shape());
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  std::vector<double> out(m * n, 0.0);
  const double* av = a.values().data();
  const double* bv = b.values().data();
  for (std::size_t i = 0; i < m; ++i) {
    double* row = out.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double x = av[i * k + p];
      if (x == 0.0) continue;
      const double* brow = bv + p * n;
      for (std::size_t j = 0; j < n; ++j) row[j] += x * brow[j];
    }
  }
  return Make({m, n}, std::move(out), {a.node(), b.node()},
              [m, k, n](Node& self) {
                const auto& pa = self.parents[0];
                const auto& pb = self.parents[1];
                const double* g = self.grad.data();
                if (double* ga = GradOf(pa)) {
                  // ga += g * B^T, with B^T materialised so the inner loop is
                  // contiguous.
                  const double* bv = pb->value.data();
                  std::vector<double> bt(k * n);
                  for (std::size_t p = 0; p < k; ++p) {
                    for (std::size_t j = 0; j < n; ++j) bt[j * k + p] = bv[p * n + j];
                  }
                  for (std::size_t i = 0; i < m; ++i) {
                    double* arow = ga + i * k;
                    for (std::size_t j = 0; j < n; ++j) {
                      const double x = g[i * n + j];
                      if (x == 0.0) continue;
                      const double* btrow = bt.data() + j * k;
                      for (std::size_t p = 0; p < k; ++p) arow[p] += x * btrow[p];
                    }
                  }
                }
                if (double* gb = GradOf(pb)) {
                  const double* av = pa->value.data();
                  for (std::size_t i = 0; i < m; ++i) {
                    for (std::size_t p = 0; p < k; ++p) {
                      const double x = av[i * k + p];
                      if (x == 0.0) continue;
                      for (std::size_t j = 0; j < n; ++j) gb[p * n + j] += x * g[i * n + j];
                    }
                  }
                }
              });
}

Tensor Transpose(const Tensor& a) {
  const std::size_t r = a.rows(), c = a.cols();
  std::vector<double> out(r * c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) out[j * r + i] = a.values()[i * c + j];
  }
  return Make({c, r}, std::move(out), {a.node()}, [r, c](Node& self) {
    double* ga = GradOf(self.parents[0]);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) ga[i * c + j] += self.grad[j * r + i];
    }
  });
}

Tensor Add(const Tensor& a, const Tensor& b) {
  RequireSame("Add", a, b);
  std::vector<double> out(a.values());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.values()[i];
  return Make(a.shape(), std::move(out), {a.node(), b.node()}, [](Node& self) {
    for (int s = 0; s < 2; ++s) {
      if (double* g = GradOf(self.parents[s])) {
        for (std::size_t i = 0; i < self.grad.size(); ++i) g[i] += self.grad[i];
      }
    }
  });
}

Tensor Sub(const Tensor& a, const Tensor& b) {
  RequireSame("Sub", a, b);
  std::vector<double> out(a.values());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.values()[i];
  return Make(a.shape(), std::move(out), {a.node(), b.node()}, [](Node& self) {
    if (double* g = GradOf(self.parents[0])) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) g[i] += self.grad[i];
    }
    if (double* g = GradOf(self.parents[1])) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) g[i] -= self.grad[i];
    }
  });
}

Tensor Mul(const Tensor& a, const Tensor& b) {
  RequireSame("Mul", a, b);
  std::vector<double> out(a.values());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b.values()[i];
  return Make(a.shape(), std::move(out), {a.node(), b.node()}, [](Node& self) {
    const auto& pa = self.parents[0];
    const auto& pb = self.parents[1];
    if (double* g = GradOf(pa)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) g[i] += self.grad[i] * pb->value[i];
    }
    if (double* g = GradOf(pb)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) g[i] += self.grad[i] * pa->value[i];
    }
  });
}

Tensor Scale(const Tensor& a, double k) {
  std::vector<double> out(a.values());
  for (double& v : out) v *= k;
  return Make(a.shape(), std::move(out), {a.node()}, [k](Node& self) {
    double* g = GradOf(self.parents[0]);
    for (std::size_t i = 0; i < self.grad.size(); ++i) g[i] += k * self.grad[i];
  });
}

Tensor AddRow(const Tensor& a, const Tensor& row) {
  RequireRow("AddRow", a, row);
  const std::size_t r = a.rows(), c = a.cols();
  std::vector<double> out(a.values());
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] += row.values()[j];
  }
  return Make(a.shape(), std::move(out), {a.node(), row.node()}, [r, c](Node& self) {
    if (double* g = GradOf(self.parents[0])) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) g[i] += self.grad[i];
    }
    if (double* g = GradOf(self.parents[1])) {
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) g[j] += self.grad[i * c + j];
      }
    }
  });
}

Tensor MulRow(const Tensor& a, const Tensor& row) {
  RequireRow("MulRow", a, row);
  const std::size_t r = a.rows(), c = a.cols();
  std::vector<double> out(a.values());
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] *= row.values()[j];
  }
  return Make(a.shape(), std::move(out), {a.node(), row.node()}, [r, c](Node& self) {
    const auto& pa = self.parents[0];
    const auto& pr = self.parents[1];
    if (double* g = GradOf(pa)) {
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) g[i * c + j] += self.grad[i * c + j] * pr->value[j];
      }
    }
    if (double* g = GradOf(pr)) {
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) g[j] += self.grad[i * c + j] * pa->value[i * c + j];
      }
    }
  });
}

Tensor MulScalar(const Tensor& a, const Tensor& s) {
  RequireScalar("MulScalar", a, s);
  const double k = s.values()[0];
  std::vector<double> out(a.values());
  for (double& v : out) v *= k;
  return Make(a.shape(), std::move(out), {a.node(), s.node()}, [](Node& self) {
    const auto& pa = self.parents[0];
    const auto& ps = self.parents[1];
    if (double* g = GradOf(pa)) {
      const double k = ps->value[0];
      for (std::size_t i = 0; i < self.grad.size(); ++i) g[i] += k * self.grad[i];
    }
    if (double* g = GradOf(ps)) {
      double acc = 0.0;
      for (std::size_t i = 0; i < self.grad.size(); ++i) acc += self.grad[i] * pa->value[i];
      g[0] += acc;
    }
  });
}

Tensor AddScalar(const Tensor& a, const Tensor& s) {
  RequireScalar("AddScalar", a, s);
  const double k = s.values()[0];
  std::vector<double> out(a.values());
  for (double& v : out) v += k;
  return Make(a.shape(), std::move(out), {a.node(), s.node()}, [](Node& self) {
    double acc = 0.0;
    double* ga = GradOf(self.parents[0]);
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      if (ga) ga[i] += self.grad[i];
      acc += self.grad[i];
    }
    if (double* gs = GradOf(self.parents[1])) gs[0] += acc;
  });
}

Tensor Linear(const Tensor& x, const Tensor& w, const Tensor& b) {
  Tensor y = MatMul(x, w);
  return b.defined() ? AddRow(y, b) : y;
}

Tensor SoftmaxRows(const Tensor& a, bool causal) {
  const std::size_t r = a.rows(), c = a.cols();
  std::vector<double> out(r * c, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    const std::size_t width = causal ? std::min(c, i + 1) : c;
    const double* in = a.values().data() + i * c;
    double mx = in[0];
    for (std::size_t j = 1; j < width; ++j) mx = std::max(mx, in[j]);
    double total = 0.0;
    for (std::size_t j = 0; j < width; ++j) {
      out[i * c + j] = std::exp(in[j] - mx);
      total += out[i * c + j];
    }
    for (std::size_t j = 0; j < width; ++j) out[i * c + j] /= total;
  }
  return Make(a.shape(), out, {a.node()}, [r, c, y = out](Node& self) {
    double* g = GradOf(self.parents[0]);
    for (std::size_t i = 0; i < r; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < c; ++j) dot += self.grad[i * c + j] * y[i * c + j];
      for (std::size_t j = 0; j < c; ++j) {
        g[i * c + j] += y[i * c + j] * (self.grad[i * c + j] - dot);
      }
    }
  });
}

Tensor LayerNormRows(const Tensor& a, double eps) {
  const std::size_t r = a.rows(), c = a.cols();
  std::vector<double> out(r * c);
  std::vector<double> inv_std(r);
  for (std::size_t i = 0; i < r; ++i) {
    const double* in = a.values().data() + i * c;
    double mean = 0.0;
    for (std::size_t j = 0; j < c; ++j) mean += in[j];
    mean /= static_cast<double>(c);
    double var = 0.0;
    for (std::size_t j = 0; j < c; ++j) var += (in[j] - mean) * (in[j] - mean);
    var /= static_cast<double>(c);
    inv_std[i] = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] = (in[j] - mean) * inv_std[i];
  }
  return Make(a.shape(), out, {a.node()},
              [r, c, y = out, inv_std = std::move(inv_std)](Node& self) {
                double* g = GradOf(self.parents[0]);
                const double n = static_cast<double>(c);
                for (std::size_t i = 0; i < r; ++i) {
                  const double* dy = self.grad.data() + i * c;
                  const double* yy = y.data() + i * c;
                  double mean_dy = 0.0, mean_dyy = 0.0;
                  for (std::size_t j = 0; j < c; ++j) {
                    mean_dy += dy[j];
                    mean_dyy += dy[j] * yy[j];
                  }
                  mean_dy /= n;
                  mean_dyy /= n;
                  for (std::size_t j = 0; j < c; ++j) {
                    g[i * c + j] += inv_std[i] * (dy[j] - mean_dy - yy[j] * mean_dyy);
                  }
                }
              });
}

Tensor Dropout(const Tensor& a, double rate, Rng& rng, bool training) {
  if (rate < 0.0 || rate >= 1.0) {
    throw std::invalid_argument("dropout rate must lie in [0, 1)");
  }
  if (!training || rate == 0.0) return a;
  const double keep_scale = 1.0 / (1.0 - rate);
  std::vector<double> mask(a.size());
  for (double& m : mask) m = rng.Uniform() < rate ? 0.0 : keep_scale;
  std::vector<double> out(a.values());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  return Make(a.shape(), std::move(out), {a.node()}, [mask = std::move(mask)](Node& self) {
    double* g = GradOf(self.parents[0]);
    for (std::size_t i = 0; i < self.grad.size(); ++i) g[i] += self.grad[i] * mask[i];
  });
}

Tensor Gelu(const Tensor& a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = a.values()[i];
    out[i] = x * NormalCdf(x);
  }
  return Make(a.shape(), std::move(out), {a.node()}, [](Node& self) {
    const auto& p = self.parents[0];
    double* g = GradOf(p);
    const double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      const double x = p->value[i];
      const double pdf = inv_sqrt_2pi * std::exp(-0.5 * x * x);
      g[i] += self.grad[i] * (NormalCdf(x) + x * pdf);
    }
  });
}

Tensor Conv1d(const Tensor& x, const Tensor& w, const Tensor& bias,
              std::size_t kernel, std::size_t segment, ConvPadding padding) {
  const std::size_t t_len = x.rows(), cin = x.cols();
  if (kernel == 0 || segment == 0 || t_len % segment != 0) {
    throw std::invalid_argument("Conv1d: " + std::to_string(t_len) +
                                " rows do not split into segments of " +
                                std::to_string(segment));
  }
  if (w.rows() != kernel * cin) ShapeError("Conv1d", x.shape(), w.shape());
  const std::size_t cout = w.cols();
  if (bias.defined() && (bias.rows() != 1 || bias.cols() != cout)) {
    ShapeError("Conv1d", w.shape(), bias.shape());
  }
  if (padding == ConvPadding::kCircular && kernel % 2 == 0) {
    throw std::invalid_argument("Conv1d: circular padding needs an odd kernel");
  }
  const auto first_offset = padding == ConvPadding::kCircular
                                ? -static_cast<std::ptrdiff_t>(kernel / 2)
                                : -static_cast<std::ptrdiff_t>(kernel - 1);
  const auto seg = static_cast<std::ptrdiff_t>(segment);
  // Source row for (output row, tap), or -1 for zero padding.
  std::vector<std::ptrdiff_t> src(t_len * kernel);
  for (std::size_t row = 0; row < t_len; ++row) {
    const auto base = static_cast<std::ptrdiff_t>(row / segment) * seg;
    const auto t = static_cast<std::ptrdiff_t>(row % segment);
    for (std::size_t k = 0; k < kernel; ++k) {
      std::ptrdiff_t s = t + first_offset + static_cast<std::ptrdiff_t>(k);
      if (padding == ConvPadding::kCircular) {
        s = ((s % seg) + seg) % seg;
      } else if (s < 0) {
        src[row * kernel + k] = -1;
        continue;
      }
      src[row * kernel + k] = base + s;
    }
  }

  std::vector<double> out(t_len * cout, 0.0);
  const double* xv = x.values().data();
  const double* wv = w.values().data();
  for (std::size_t row = 0; row < t_len; ++row) {
    double* y = out.data() + row * cout;
    if (bias.defined()) {
      for (std::size_t o = 0; o < cout; ++o) y[o] = bias.values()[o];
    }
    for (std::size_t k = 0; k < kernel; ++k) {
      const auto s = src[row * kernel + k];
      if (s < 0) continue;
      for (std::size_t c = 0; c < cin; ++c) {
        const double v = xv[static_cast<std::size_t>(s) * cin + c];
        const double* wr = wv + (k * cin + c) * cout;
        for (std::size_t o = 0; o < cout; ++o) y[o] += v * wr[o];
      }
    }
  }
  std::vector<NodePtr> parents = {x.node(), w.node()};
  if (bias.defined()) parents.push_back(bias.node());
  return Make({t_len, cout}, std::move(out), std::move(parents),
              [t_len, cin, cout, kernel, src = std::move(src)](Node& self) {
                const auto& px = self.parents[0];
                const auto& pw = self.parents[1];
                double* gx = GradOf(px);
                double* gw = GradOf(pw);
                const double* dy = self.grad.data();
                for (std::size_t row = 0; row < t_len; ++row) {
                  const double* g = dy + row * cout;
                  for (std::size_t k = 0; k < kernel; ++k) {
                    const auto s = src[row * kernel + k];
                    if (s < 0) continue;
                    for (std::size_t c = 0; c < cin; ++c) {
                      const std::size_t xi = static_cast<std::size_t>(s) * cin + c;
                      const std::size_t wi = (k * cin + c) * cout;
                      if (gx) {
                        double acc = 0.0;
                        for (std::size_t o = 0; o < cout; ++o) acc += g[o] * pw->value[wi + o];
                        gx[xi] += acc;
                      }
                      if (gw) {
                        const double v = px->value[xi];
                        for (std::size_t o = 0; o < cout; ++o) gw[wi + o] += v * g[o];
                      }
                    }
                  }
                }
                if (self.parents.size() > 2) {
                  if (double* gb = GradOf(self.parents[2])) {
                    for (std::size_t row = 0; row < t_len; ++row) {
                      for (std::size_t o = 0; o < cout; ++o) gb[o] += dy[row * cout + o];
                    }
                  }
                }
              });
}

Tensor Embedding(const Tensor& table, std::span<const std::size_t> ids) {
  const std::size_t d = table.cols();
  std::vector<double> out(ids.size() * d);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= table.rows()) {
      throw std::out_of_range("embedding id " + std::to_string(ids[i]) +
                              " outside vocabulary of " + std::to_string(table.rows()));
    }
    std::copy_n(table.values().begin() + static_cast<std::ptrdiff_t>(ids[i] * d), d,
                out.begin() + static_cast<std::ptrdiff_t>(i * d));
  }
  return Make({ids.size(), d}, std::move(out), {table.node()},
              [d, ids = std::vector<std::size_t>(ids.begin(), ids.end())](Node& self) {
                double* g = GradOf(self.parents[0]);
                for (std::size_t i = 0; i < ids.size(); ++i) {
                  for (std::size_t j = 0; j < d; ++j) g[ids[i] * d + j] += self.grad[i * d + j];
                }
              });
}

Tensor ConcatRows(std::span<const Tensor> parts) {
  if (parts.empty()) throw std::invalid_argument("ConcatRows: no inputs");
  const std::size_t c = parts[0].cols();
  std::size_t r = 0;
  std::vector<NodePtr> parents;
  for (const auto& p : parts) {
    if (p.cols() != c) ShapeError("ConcatRows", parts[0].shape(), p.shape());
    r += p.rows();
    parents.push_back(p.node());
  }
  std::vector<double> out;
  out.reserve(r * c);
  for (const auto& p : parts) out.insert(out.end(), p.values().begin(), p.values().end());
  return Make({r, c}, std::move(out), std::move(parents), [](Node& self) {
    std::size_t offset = 0;
    for (const auto& p : self.parents) {
      if (double* g = GradOf(p)) {
        for (std::size_t i = 0; i < p->value.size(); ++i) g[i] += self.grad[offset + i];
      }
      offset += p->value.size();
    }
  });
}

Tensor ConcatCols(std::span<const Tensor> parts) {
  if (parts.empty()) throw std::invalid_argument("ConcatCols: no inputs");
  const std::size_t r = parts[0].rows();
  std::size_t c = 0;
  std::vector<NodePtr> parents;
  for (const auto& p : parts) {
    if (p.rows() != r) ShapeError("ConcatCols", parts[0].shape(), p.shape());
    c += p.cols();
    parents.push_back(p.node());
  }
  std::vector<double> out(r * c);
  std::size_t offset = 0;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < p.cols(); ++j) out[i * c + offset + j] = p.at(i, j);
    }
    offset += p.cols();
  }
  return Make({r, c}, std::move(out), std::move(parents), [r, c](Node& self) {
    std::size_t offset = 0;
    for (const auto& p : self.parents) {
      const std::size_t pc = p->shape.cols;
      if (double* g = GradOf(p)) {
        for (std::size_t i = 0; i < r; ++i) {
          for (std::size_t j = 0; j < pc; ++j) g[i * pc + j] += self.grad[i * c + offset + j];
        }
      }
      offset += pc;
    }
  });
}

Tensor SliceRows(const Tensor& a, std::size_t begin, std::size_t count) {
  if (begin + count > a.rows()) {
    throw std::invalid_argument("SliceRows: rows [" + std::to_string(begin) + ", " +
                                std::to_string(begin + count) + ") outside " +
                                ShapeString(a.shape()));
  }
  const std::size_t c = a.cols();
  std::vector<double> out(a.values().begin() + static_cast<std::ptrdiff_t>(begin * c),
                          a.values().begin() + static_cast<std::ptrdiff_t>((begin + count) * c));
  return Make({count, c}, std::move(out), {a.node()}, [begin, c](Node& self) {
    double* g = GradOf(self.parents[0]);
    for (std::size_t i = 0; i < self.grad.size(); ++i) g[begin * c + i] += self.grad[i];
  });
}

Tensor SliceCols(const Tensor& a, std::size_t begin, std::size_t count) {
  if (begin + count > a.cols()) {
    throw std::invalid_argument("SliceCols: cols [" + std::to_string(begin) + ", " +
                                std::to_string(begin + count) + ") outside " +
                                ShapeString(a.shape()));
  }
  const std::size_t r = a.rows(), c = a.cols();
  std::vector<double> out(r * count);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < count; ++j) out[i * count + j] = a.values()[i * c + begin + j];
  }
  return Make({r, count}, std::move(out), {a.node()}, [r, c, begin, count](Node& self) {
    double* g = GradOf(self.parents[0]);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < count; ++j) g[i * c + begin + j] += self.grad[i * count + j];
    }
  });
}

Tensor Abs(const Tensor& a) {
  std::vector<double> out(a.values());
  for (double& v : out) v = std::abs(v);
  return Make(a.shape(), std::move(out), {a.node()}, [](Node& self) {
    const auto& p = self.parents[0];
    double* g = GradOf(p);
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      const double x = p->value[i];
      g[i] += self.grad[i] * (x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0));
    }
  });
}

Tensor Sum(const Tensor& a) {
  double s = 0.0;
  for (double v : a.values()) s += v;
  return Make({1, 1}, {s}, {a.node()}, [](Node& self) {
    double* g = GradOf(self.parents[0]);
    const std::size_t n = self.parents[0]->value.size();
    for (std::size_t i = 0; i < n; ++i) g[i] += self.grad[0];
  });
}

Tensor Mean(const Tensor& a) {
  if (a.size() == 0) throw std::invalid_argument("Mean of an empty tensor");
  return Scale(Sum(a), 1.0 / static_cast<double>(a.size()));
}

Tensor L1Loss(const Tensor& pred, const Tensor& target) {
  RequireSame("L1Loss", pred, target);
  return Mean(Abs(Sub(pred, target)));
}

Tensor HuberLoss(const Tensor& pred, const Tensor& target, double delta) {
  RequireSame("HuberLoss", pred, target);
  if (!(delta > 0.0)) throw std::invalid_argument("Huber delta must be positive");
  const Tensor r = Sub(pred, target);
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = std::abs(r.values()[i]);
    out[i] = x <= delta ? 0.5 * x * x : delta * (x - 0.5 * delta);
  }
  const Tensor h = Make(r.shape(), std::move(out), {r.node()}, [delta](Node& self) {
    const auto& p = self.parents[0];
    double* g = GradOf(p);
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      const double x = p->value[i];
      g[i] += self.grad[i] * std::clamp(x, -delta, delta);
    }
  });
  return Mean(h);
}

}  // namespace hrdiff
