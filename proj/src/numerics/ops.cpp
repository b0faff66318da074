/*
 * Copyright (c) 2026 The viskd Authors
 *
 * Licensed under the Apache License, Version 2.0;
 * You may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an 'AS IS' BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "numerics/ops.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>

#include "common/error.hpp"

namespace viskd::num {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using MapConstMat = Eigen::Map<const RowMat>;

void require_same_shape(const Var& a, const Var& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw_contract(std::string(op) + ": shape mismatch " +
                   shape_to_string(a.shape()) + " vs " +
                   shape_to_string(b.shape()));
  }
}

std::size_t last_dim(const Shape& s, const char* op) {
  if (s.empty()) throw_contract(std::string(op) + ": scalar input");
  return s.back();
}

void accumulate(double* sink, const Tensor& g) {
  if (!sink) return;
  const double* src = g.data().data();
  for (std::size_t i = 0, n = g.numel(); i < n; ++i) sink[i] += src[i];
}

}  // namespace

Var add(Var a, Var b) {
  require_same_shape(a, b, "add");
  Tensor out = a.value();
  auto& o = out.storage();
  const auto& bv = b.value().storage();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += bv[i];
  return a.tape()->record(std::move(out), {a, b},
                          [a, b](Tape& t, const Tensor& g) {
                            accumulate(t.grad_sink(a), g);
                            accumulate(t.grad_sink(b), g);
                          });
}

Var sub(Var a, Var b) {
  require_same_shape(a, b, "sub");
  Tensor out = a.value();
  auto& o = out.storage();
  const auto& bv = b.value().storage();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bv[i];
  return a.tape()->record(std::move(out), {a, b},
                          [a, b](Tape& t, const Tensor& g) {
                            accumulate(t.grad_sink(a), g);
                            if (double* gb = t.grad_sink(b)) {
                              for (std::size_t i = 0; i < g.numel(); ++i) gb[i] -= g[i];
                            }
                          });
}

Var mul(Var a, Var b) {
  require_same_shape(a, b, "mul");
  Tensor out = a.value();
  auto& o = out.storage();
  const auto& bv = b.value().storage();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] *= bv[i];
  return a.tape()->record(std::move(out), {a, b},
                          [a, b](Tape& t, const Tensor& g) {
                            const auto& av = a.value().storage();
                            const auto& bv = b.value().storage();
                            if (double* ga = t.grad_sink(a)) {
                              for (std::size_t i = 0; i < g.numel(); ++i) ga[i] += g[i] * bv[i];
                            }
                            if (double* gb = t.grad_sink(b)) {
                              for (std::size_t i = 0; i < g.numel(); ++i) gb[i] += g[i] * av[i];
                            }
                          });
}

Var scale(Var a, double factor) {
  Tensor out = a.value();
  for (double& v : out.storage()) v *= factor;
  return a.tape()->record(std::move(out), {a},
                          [a, factor](Tape& t, const Tensor& g) {
                            if (double* ga = t.grad_sink(a)) {
                              for (std::size_t i = 0; i < g.numel(); ++i) ga[i] += factor * g[i];
                            }
                          });
}

Var square(Var a) {
  Tensor out = a.value();
  for (double& v : out.storage()) v *= v;
  return a.tape()->record(std::move(out), {a}, [a](Tape& t, const Tensor& g) {
    if (double* ga = t.grad_sink(a)) {
      const auto& av = a.value().storage();
      for (std::size_t i = 0; i < g.numel(); ++i) ga[i] += 2.0 * av[i] * g[i];
    }
  });
}

Var sum(Var a) {
  double s = 0.0;
  for (double v : a.value().storage()) s += v;
  return a.tape()->record(Tensor::scalar(s), {a}, [a](Tape& t, const Tensor& g) {
    if (double* ga = t.grad_sink(a)) {
      const double gv = g[0];
      for (std::size_t i = 0, n = a.value().numel(); i < n; ++i) ga[i] += gv;
    }
  });
}

Var mean(Var a) {
  const std::size_t n = a.value().numel();
  if (n == 0) throw_contract("mean of an empty tensor");
  return scale(sum(a), 1.0 / static_cast<double>(n));
}

Var matmul(Var a, Var w) {
  const Shape& as = a.shape();
  const Shape& ws = w.shape();
  if (ws.size() != 2) throw_contract("matmul: weight must be rank 2");
  const std::size_t k = last_dim(as, "matmul");
  if (ws[0] != k) {
    throw_contract("matmul: inner dimension mismatch " + shape_to_string(as) +
                   " x " + shape_to_string(ws));
  }
  const std::size_t n = ws[1];
  const std::size_t m = a.value().numel() / k;
  Shape out_shape = as;
  out_shape.back() = n;
  Tensor out(out_shape);
  MapMat(out.data().data(), m, n).noalias() =
      MapConstMat(a.value().data().data(), m, k) *
      MapConstMat(w.value().data().data(), k, n);
  return a.tape()->record(std::move(out), {a, w},
                          [a, w, m, k, n](Tape& t, const Tensor& g) {
                            MapConstMat G(g.data().data(), m, n);
                            if (double* ga = t.grad_sink(a)) {
                              MapMat(ga, m, k).noalias() +=
                                  G * MapConstMat(w.value().data().data(), k, n).transpose();
                            }
                            if (double* gw = t.grad_sink(w)) {
                              MapMat(gw, k, n).noalias() +=
                                  MapConstMat(a.value().data().data(), m, k).transpose() * G;
                            }
                          });
}

Var add_bias(Var x, Var bias) {
  const std::size_t n = last_dim(x.shape(), "add_bias");
  if (bias.shape() != Shape{n}) {
    throw_contract("add_bias: bias shape " + shape_to_string(bias.shape()) +
                   " does not match last axis " + std::to_string(n));
  }
  Tensor out = x.value();
  const std::size_t m = out.numel() / n;
  MapMat(out.data().data(), m, n).rowwise() +=
      Eigen::Map<const Eigen::RowVectorXd>(bias.value().data().data(), n);
  return x.tape()->record(std::move(out), {x, bias},
                          [x, bias, m, n](Tape& t, const Tensor& g) {
                            accumulate(t.grad_sink(x), g);
                            if (double* gb = t.grad_sink(bias)) {
                              Eigen::Map<Eigen::RowVectorXd>(gb, n) +=
                                  MapConstMat(g.data().data(), m, n).colwise().sum();
                            }
                          });
}

Var relu(Var x) {
  Tensor out = x.value();
  for (double& v : out.storage()) v = v > 0.0 ? v : 0.0;
  return x.tape()->record(std::move(out), {x}, [x](Tape& t, const Tensor& g) {
    if (double* gx = t.grad_sink(x)) {
      const auto& xv = x.value().storage();
      for (std::size_t i = 0; i < g.numel(); ++i) {
        if (xv[i] > 0.0) gx[i] += g[i];
      }
    }
  });
}

Var gelu(Var x) {
  constexpr double kC = 0.7978845608028654;  // sqrt(2 / pi)
  constexpr double kA = 0.044715;
  Tensor out = x.value();
  for (double& v : out.storage()) {
    v = 0.5 * v * (1.0 + std::tanh(kC * (v + kA * v * v * v)));
  }
  return x.tape()->record(std::move(out), {x}, [x](Tape& t, const Tensor& g) {
    if (double* gx = t.grad_sink(x)) {
      const auto& xv = x.value().storage();
      for (std::size_t i = 0; i < g.numel(); ++i) {
        const double v = xv[i];
        const double th = std::tanh(kC * (v + kA * v * v * v));
        const double d = 0.5 * (1.0 + th) +
                         0.5 * v * (1.0 - th * th) * kC * (1.0 + 3.0 * kA * v * v);
        gx[i] += g[i] * d;
      }
    }
  });
}

Var activate(Var x, Activation activation) {
  return activation == Activation::kGelu ? gelu(x) : relu(x);
}

Var layer_norm(Var x, Var gamma, Var beta, double eps) {
  const std::size_t n = last_dim(x.shape(), "layer_norm");
  if (gamma.shape() != Shape{n} || beta.shape() != Shape{n}) {
    throw_contract("layer_norm: gamma/beta must have shape [" +
                   std::to_string(n) + "]");
  }
  const std::size_t m = x.value().numel() / n;
  auto xhat = std::make_shared<std::vector<double>>(m * n);
  auto inv_std = std::make_shared<std::vector<double>>(m);
  Tensor out(x.shape());
  const double* xv = x.value().data().data();
  const double* gv = gamma.value().data().data();
  const double* bv = beta.value().data().data();
  double* ov = out.data().data();
  for (std::size_t r = 0; r < m; ++r) {
    const double* row = xv + r * n;
    double mu = 0.0;
    for (std::size_t j = 0; j < n; ++j) mu += row[j];
    mu /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t j = 0; j < n; ++j) var += (row[j] - mu) * (row[j] - mu);
    var /= static_cast<double>(n);
    const double is = 1.0 / std::sqrt(var + eps);
    (*inv_std)[r] = is;
    for (std::size_t j = 0; j < n; ++j) {
      const double h = (row[j] - mu) * is;
      (*xhat)[r * n + j] = h;
      ov[r * n + j] = h * gv[j] + bv[j];
    }
  }
  return x.tape()->record(
      std::move(out), {x, gamma, beta},
      [x, gamma, beta, xhat, inv_std, m, n](Tape& t, const Tensor& g) {
        const double* gg = g.data().data();
        const double* gam = gamma.value().data().data();
        if (double* dgamma = t.grad_sink(gamma)) {
          for (std::size_t r = 0; r < m; ++r)
            for (std::size_t j = 0; j < n; ++j) dgamma[j] += gg[r * n + j] * (*xhat)[r * n + j];
        }
        if (double* dbeta = t.grad_sink(beta)) {
          for (std::size_t r = 0; r < m; ++r)
            for (std::size_t j = 0; j < n; ++j) dbeta[j] += gg[r * n + j];
        }
        if (double* dx = t.grad_sink(x)) {
          const double inv_n = 1.0 / static_cast<double>(n);
          for (std::size_t r = 0; r < m; ++r) {
            double mean_d = 0.0;
            double mean_dh = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
              const double d = gg[r * n + j] * gam[j];
              mean_d += d;
              mean_dh += d * (*xhat)[r * n + j];
            }
            mean_d *= inv_n;
            mean_dh *= inv_n;
            for (std::size_t j = 0; j < n; ++j) {
              const double d = gg[r * n + j] * gam[j];
              dx[r * n + j] +=
                  (*inv_std)[r] * (d - mean_d - (*xhat)[r * n + j] * mean_dh);
            }
          }
        }
      });
}

namespace {

void softmax_inplace(double* row, std::size_t n) {
  double mx = row[0];
  for (std::size_t j = 1; j < n; ++j) mx = std::max(mx, row[j]);
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    row[j] = std::exp(row[j] - mx);
    s += row[j];
  }
  const double inv = 1.0 / s;
  for (std::size_t j = 0; j < n; ++j) row[j] *= inv;
}

}  // namespace

Tensor softmax_rows(const Tensor& logits) {
  if (!logits.all_finite()) throw_numeric_input("softmax: non-finite logits");
  const std::size_t n = last_dim(logits.shape(), "softmax");
  Tensor out = logits;
  if (n == 0) return out;
  const std::size_t m = out.numel() / n;
  for (std::size_t r = 0; r < m; ++r) softmax_inplace(out.data().data() + r * n, n);
  return out;
}

Var softmax(Var x) {
  Tensor out = softmax_rows(x.value());
  const std::size_t n = x.shape().back();
  const std::size_t m = n == 0 ? 0 : out.numel() / n;
  auto y = std::make_shared<Tensor>(out);
  return x.tape()->record(std::move(out), {x}, [x, y, m, n](Tape& t, const Tensor& g) {
    if (double* gx = t.grad_sink(x)) {
      for (std::size_t r = 0; r < m; ++r) {
        double dot = 0.0;
        for (std::size_t j = 0; j < n; ++j) dot += g[r * n + j] * (*y)[r * n + j];
        for (std::size_t j = 0; j < n; ++j) {
          gx[r * n + j] += (*y)[r * n + j] * (g[r * n + j] - dot);
        }
      }
    }
  });
}

Var attention(Var q, Var k, Var v, std::size_t n_heads) {
  const Shape& s = q.shape();
  if (s.size() != 3) throw_contract("attention: inputs must be [B, T, D]");
  if (k.shape() != s || v.shape() != s) throw_contract("attention: q/k/v shape mismatch");
  const std::size_t B = s[0], T = s[1], D = s[2];
  if (n_heads == 0 || D % n_heads != 0) {
    throw_contract("attention: d_model " + std::to_string(D) +
                   " not divisible by n_heads " + std::to_string(n_heads));
  }
  const std::size_t dh = D / n_heads;
  const double sc = 1.0 / std::sqrt(static_cast<double>(dh));
  auto probs = std::make_shared<std::vector<double>>(B * n_heads * T * T);
  Tensor out(s);
  RowMat S(T, T);
  for (std::size_t b = 0; b < B; ++b) {
    MapConstMat Q(q.value().data().data() + b * T * D, T, D);
    MapConstMat K(k.value().data().data() + b * T * D, T, D);
    MapConstMat V(v.value().data().data() + b * T * D, T, D);
    MapMat O(out.data().data() + b * T * D, T, D);
    for (std::size_t h = 0; h < n_heads; ++h) {
      S.noalias() = sc * Q.middleCols(h * dh, dh) * K.middleCols(h * dh, dh).transpose();
      for (std::size_t r = 0; r < T; ++r) softmax_inplace(S.data() + r * T, T);
      std::copy_n(S.data(), T * T, probs->data() + (b * n_heads + h) * T * T);
      O.middleCols(h * dh, dh).noalias() = S * V.middleCols(h * dh, dh);
    }
  }
  return q.tape()->record(
      std::move(out), {q, k, v},
      [q, k, v, probs, B, T, D, n_heads, dh, sc](Tape& t, const Tensor& g) {
        double* gq = t.grad_sink(q);
        double* gk = t.grad_sink(k);
        double* gv = t.grad_sink(v);
        RowMat dP(T, T);
        RowMat dS(T, T);
        for (std::size_t b = 0; b < B; ++b) {
          MapConstMat Q(q.value().data().data() + b * T * D, T, D);
          MapConstMat K(k.value().data().data() + b * T * D, T, D);
          MapConstMat V(v.value().data().data() + b * T * D, T, D);
          MapConstMat G(g.data().data() + b * T * D, T, D);
          for (std::size_t h = 0; h < n_heads; ++h) {
            MapConstMat P(probs->data() + (b * n_heads + h) * T * T, T, T);
            const auto Gh = G.middleCols(h * dh, dh);
            if (gv) {
              MapMat(gv + b * T * D, T, D).middleCols(h * dh, dh).noalias() +=
                  P.transpose() * Gh;
            }
            if (!gq && !gk) continue;
            dP.noalias() = Gh * V.middleCols(h * dh, dh).transpose();
            for (std::size_t r = 0; r < T; ++r) {
              const double dot = P.row(r).dot(dP.row(r));
              dS.row(r) = (P.row(r).array() * (dP.row(r).array() - dot)).matrix();
            }
            if (gq) {
              MapMat(gq + b * T * D, T, D).middleCols(h * dh, dh).noalias() +=
                  sc * dS * K.middleCols(h * dh, dh);
            }
            if (gk) {
              MapMat(gk + b * T * D, T, D).middleCols(h * dh, dh).noalias() +=
                  sc * dS.transpose() * Q.middleCols(h * dh, dh);
            }
          }
        }
      });
}

Var dropout(Var x, double rate, bool train, Rng& rng) {
  if (rate < 0.0 || rate >= 1.0) throw_contract("dropout: rate must be in [0, 1)");
  if (!train || rate == 0.0) return x;
  const double keep_scale = 1.0 / (1.0 - rate);
  auto mask = std::make_shared<std::vector<double>>(x.value().numel());
  Tensor out = x.value();
  for (std::size_t i = 0; i < mask->size(); ++i) {
    (*mask)[i] = uniform01(rng) >= rate ? keep_scale : 0.0;
    out[i] *= (*mask)[i];
  }
  return x.tape()->record(std::move(out), {x}, [x, mask](Tape& t, const Tensor& g) {
    if (double* gx = t.grad_sink(x)) {
      for (std::size_t i = 0; i < g.numel(); ++i) gx[i] += g[i] * (*mask)[i];
    }
  });
}

namespace {

struct AxisSplit {
  std::size_t outer = 1;
  std::size_t inner = 1;
};

AxisSplit split_at(const Shape& s, std::size_t axis) {
  AxisSplit a;
  for (std::size_t i = 0; i < axis; ++i) a.outer *= s[i];
  for (std::size_t i = axis + 1; i < s.size(); ++i) a.inner *= s[i];
  return a;
}

}  // namespace

Var concat(const std::vector<Var>& parts, std::size_t axis) {
  if (parts.empty()) throw_contract("concat: no inputs");
  const Shape& first = parts.front().shape();
  if (axis >= first.size()) throw_contract("concat: axis out of range");
  Shape out_shape = first;
  out_shape[axis] = 0;
  for (const Var& p : parts) {
    const Shape& ps = p.shape();
    if (ps.size() != first.size()) throw_contract("concat: rank mismatch");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (i != axis && ps[i] != first[i]) {
        throw_contract("concat: shape mismatch " + shape_to_string(ps) + " vs " +
                       shape_to_string(first));
      }
    }
    out_shape[axis] += ps[axis];
  }
  const AxisSplit sp = split_at(out_shape, axis);
  const std::size_t out_chunk = out_shape[axis] * sp.inner;
  Tensor out(out_shape);
  std::vector<std::size_t> offsets;
  std::size_t offset = 0;
  for (const Var& p : parts) {
    const std::size_t chunk = p.shape()[axis] * sp.inner;
    const double* src = p.value().data().data();
    for (std::size_t o = 0; o < sp.outer; ++o) {
      std::copy_n(src + o * chunk, chunk, out.data().data() + o * out_chunk + offset);
    }
    offsets.push_back(offset);
    offset += chunk;
  }
  return parts.front().tape()->record(
      std::move(out), parts,
      [parts, offsets, sp, out_chunk, axis](Tape& t, const Tensor& g) {
        for (std::size_t i = 0; i < parts.size(); ++i) {
          double* gp = t.grad_sink(parts[i]);
          if (!gp) continue;
          const std::size_t chunk = parts[i].shape()[axis] * sp.inner;
          for (std::size_t o = 0; o < sp.outer; ++o) {
            const double* src = g.data().data() + o * out_chunk + offsets[i];
            for (std::size_t j = 0; j < chunk; ++j) gp[o * chunk + j] += src[j];
          }
        }
      });
}

Var slice(Var x, std::size_t axis, std::size_t begin, std::size_t end) {
  const Shape& s = x.shape();
  if (axis >= s.size()) throw_contract("slice: axis out of range");
  if (begin > end || end > s[axis]) throw_contract("slice: bad range");
  const AxisSplit sp = split_at(s, axis);
  Shape out_shape = s;
  out_shape[axis] = end - begin;
  const std::size_t in_chunk = s[axis] * sp.inner;
  const std::size_t out_chunk = (end - begin) * sp.inner;
  const std::size_t start = begin * sp.inner;
  Tensor out(out_shape);
  for (std::size_t o = 0; o < sp.outer; ++o) {
    std::copy_n(x.value().data().data() + o * in_chunk + start, out_chunk,
                out.data().data() + o * out_chunk);
  }
  return x.tape()->record(std::move(out), {x},
                          [x, sp, in_chunk, out_chunk, start](Tape& t, const Tensor& g) {
                            double* gx = t.grad_sink(x);
                            if (!gx) return;
                            for (std::size_t o = 0; o < sp.outer; ++o) {
                              for (std::size_t j = 0; j < out_chunk; ++j) {
                                gx[o * in_chunk + start + j] += g[o * out_chunk + j];
                              }
                            }
                          });
}

Var reshape(Var x, Shape shape) {
  if (shape_numel(shape) != x.value().numel()) {
    throw_contract("reshape: " + shape_to_string(x.shape()) + " -> " +
                   shape_to_string(shape));
  }
  return x.tape()->record(x.value().reshaped(std::move(shape)), {x},
                          [x](Tape& t, const Tensor& g) {
                            accumulate(t.grad_sink(x), g);
                          });
}

Var embedding(Var table, std::span<const std::size_t> ids) {
  const Shape& s = table.shape();
  if (s.size() != 2) throw_contract("embedding: table must be [V, D]");
  const std::size_t V = s[0], D = s[1];
  std::vector<std::size_t> idx(ids.begin(), ids.end());
  Tensor out({idx.size(), D});
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= V) throw_contract("embedding: id out of range");
    std::copy_n(table.value().data().data() + idx[i] * D, D, out.data().data() + i * D);
  }
  return table.tape()->record(std::move(out), {table},
                              [table, idx, D](Tape& t, const Tensor& g) {
                                double* gt = t.grad_sink(table);
                                if (!gt) return;
                                for (std::size_t i = 0; i < idx.size(); ++i) {
                                  for (std::size_t j = 0; j < D; ++j) {
                                    gt[idx[i] * D + j] += g[i * D + j];
                                  }
                                }
                              });
}

Var feed_forward(Var x, Var w1, Var b1, Var w2, Var b2, Activation activation) {
  return linear(activate(linear(x, w1, b1), activation), w2, b2);
}

}  // namespace viskd::num
