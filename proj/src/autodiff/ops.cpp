// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/autodiff/ops.hpp"

#include <cblas.h>

#include <algorithm>
#include <cmath>

#include "umbra/error.hpp"

namespace umbra::ad {
namespace {

/// Row-major C[M,N] = alpha·op(A)[M,K]·op(B)[K,N] + beta·C.
void gemm(bool trans_a, bool trans_b, int m, int n, int k, float alpha, const float* a, const float* b, float beta,
          float* c) {
    cblas_sgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans, trans_b ? CblasTrans : CblasNoTrans, m, n, k,
                alpha, a, trans_a ? m : k, b, trans_b ? k : n, beta, c, n);
}
void gemm(bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a, const double* b,
          double beta, double* c) {
    cblas_dgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans, trans_b ? CblasTrans : CblasNoTrans, m, n, k,
                alpha, a, trans_a ? m : k, b, trans_b ? k : n, beta, c, n);
}

[[noreturn]] void shape_fail(const char* op, const std::string& detail) {
    throw ShapeError(std::string(op) + ": " + detail);
}

template <typename T>
std::shared_ptr<Node<T>> make_node(Shape shape, const char* op, std::initializer_list<const Tensor<T>*> inputs) {
    auto node = std::make_shared<Node<T>>();
    node->value.assign(numel(shape), T(0));
    node->shape = std::move(shape);
    node->op = op;
    if (grad_enabled()) {
        bool any = false;
        for (const auto* t : inputs) any = any || t->requires_grad();
        if (any) {
            node->requires_grad = true;
            for (const auto* t : inputs) node->parents.push_back(t->node());
        }
    }
    return node;
}

template <typename T>
void same_shape(const char* op, const Tensor<T>& a, const Tensor<T>& b) {
    if (a.shape() != b.shape()) shape_fail(op, shape_str(a.shape()) + " vs " + shape_str(b.shape()));
}

/// Gradient target of parent i, or nullptr when it needs none.
template <typename T>
T* grad_of(Node<T>& node, std::size_t i) {
    Node<T>& p = *node.parents[i];
    return p.requires_grad ? p.ensure_grad().data() : nullptr;
}

struct ConvGeometry {
    int n, c, h, w, o, k, stride, pad, ho, wo;
    int ck() const { return c * k * k; }
    int cols() const { return n * ho * wo; }
};

/// Output columns [lo, hi) whose input column ox·stride − pad + kj lies inside [0, w).
inline void valid_range(const ConvGeometry& g, int kj, int& lo, int& hi) {
    const int shift = kj - g.pad;
    lo = shift >= 0 ? 0 : (-shift + g.stride - 1) / g.stride;
    hi = (g.w - 1 - shift) < 0 ? 0 : (g.w - 1 - shift) / g.stride + 1;
    hi = std::min(hi, g.wo);
    lo = std::min(lo, hi);
}

template <typename T>
void im2col(const ConvGeometry& g, const T* x, T* col) {
    const int plane = g.ho * g.wo;
    for (int c = 0; c < g.c; ++c) {
        for (int ki = 0; ki < g.k; ++ki) {
            for (int kj = 0; kj < g.k; ++kj) {
                T* row = col + std::size_t((c * g.k + ki) * g.k + kj) * g.cols();
                int lo, hi;
                valid_range(g, kj, lo, hi);
                const int shift = kj - g.pad;
                for (int n = 0; n < g.n; ++n) {
                    const T* src = x + (std::size_t(n) * g.c + c) * g.h * g.w;
                    T* dst = row + std::size_t(n) * plane;
                    for (int oy = 0; oy < g.ho; ++oy) {
                        T* out = dst + oy * g.wo;
                        const int iy = oy * g.stride - g.pad + ki;
                        if (iy < 0 || iy >= g.h) {
                            std::fill(out, out + g.wo, T(0));
                            continue;
                        }
                        const T* in = src + iy * g.w + shift;
                        std::fill(out, out + lo, T(0));
                        if (g.stride == 1) {
                            std::copy(in + lo, in + hi, out + lo);
                        } else {
                            for (int ox = lo; ox < hi; ++ox) out[ox] = in[ox * g.stride];
                        }
                        std::fill(out + hi, out + g.wo, T(0));
                    }
                }
            }
        }
    }
}

template <typename T>
void col2im(const ConvGeometry& g, const T* col, T* dx) {
    const int plane = g.ho * g.wo;
    for (int c = 0; c < g.c; ++c) {
        for (int ki = 0; ki < g.k; ++ki) {
            for (int kj = 0; kj < g.k; ++kj) {
                const T* row = col + std::size_t((c * g.k + ki) * g.k + kj) * g.cols();
                int lo, hi;
                valid_range(g, kj, lo, hi);
                const int shift = kj - g.pad;
                for (int n = 0; n < g.n; ++n) {
                    T* dst = dx + (std::size_t(n) * g.c + c) * g.h * g.w;
                    const T* src = row + std::size_t(n) * plane;
                    for (int oy = 0; oy < g.ho; ++oy) {
                        const int iy = oy * g.stride - g.pad + ki;
                        if (iy < 0 || iy >= g.h) continue;
                        T* out = dst + iy * g.w + shift;
                        const T* in = src + oy * g.wo;
                        if (g.stride == 1) {
                            for (int ox = lo; ox < hi; ++ox) out[ox] += in[ox];
                        } else {
                            for (int ox = lo; ox < hi; ++ox) out[ox * g.stride] += in[ox];
                        }
                    }
                }
            }
        }
    }
}

}  // namespace

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
    same_shape("add", a, b);
    auto out = make_node<T>(a.shape(), "add", {&a, &b});
    auto av = a.data(), bv = b.data();
    for (std::size_t i = 0; i < av.size(); ++i) out->value[i] = av[i] + bv[i];
    if (out->requires_grad) {
        out->backward = [](Node<T>& n) {
            for (std::size_t p = 0; p < 2; ++p) {
                if (T* g = grad_of(n, p)) {
                    for (std::size_t i = 0; i < n.grad.size(); ++i) g[i] += n.grad[i];
                }
            }
        };
    }
    return Tensor<T>(out);
}

template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) {
    same_shape("mul", a, b);
    auto out = make_node<T>(a.shape(), "mul", {&a, &b});
    auto av = a.data(), bv = b.data();
    for (std::size_t i = 0; i < av.size(); ++i) out->value[i] = av[i] * bv[i];
    if (out->requires_grad) {
        out->backward = [](Node<T>& n) {
            const auto& x = n.parents[0]->value;
            const auto& y = n.parents[1]->value;
            if (T* g = grad_of(n, 0)) {
                for (std::size_t i = 0; i < n.grad.size(); ++i) g[i] += n.grad[i] * y[i];
            }
            if (T* g = grad_of(n, 1)) {
                for (std::size_t i = 0; i < n.grad.size(); ++i) g[i] += n.grad[i] * x[i];
            }
        };
    }
    return Tensor<T>(out);
}

template <typename T>
Tensor<T> scale(const Tensor<T>& a, T factor) {
    auto out = make_node<T>(a.shape(), "scale", {&a});
    auto av = a.data();
    for (std::size_t i = 0; i < av.size(); ++i) out->value[i] = av[i] * factor;
    if (out->requires_grad) {
        out->backward = [factor](Node<T>& n) {
            if (T* g = grad_of(n, 0)) {
                for (std::size_t i = 0; i < n.grad.size(); ++i) g[i] += n.grad[i] * factor;
            }
        };
    }
    return Tensor<T>(out);
}

template <typename T>
Tensor<T> add_per_channel(const Tensor<T>& x, const Tensor<T>& bias) {
    if (x.rank() < 2 || bias.rank() != 2 || bias.dim(0) != x.dim(0) || bias.dim(1) != x.dim(1)) {
        shape_fail("add_per_channel", shape_str(x.shape()) + " with bias " + shape_str(bias.shape()));
    }
    const std::size_t rows = std::size_t(x.dim(0)) * x.dim(1);
    const std::size_t inner = x.numel() / rows;
    auto out = make_node<T>(x.shape(), "add_per_channel", {&x, &bias});
    auto xv = x.data(), bv = bias.data();
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t i = 0; i < inner; ++i) out->value[r * inner + i] = xv[r * inner + i] + bv[r];
    if (out->requires_grad) {
        out->backward = [rows, inner](Node<T>& n) {
            if (T* g = grad_of(n, 0)) {
                for (std::size_t i = 0; i < n.grad.size(); ++i) g[i] += n.grad[i];
            }
            if (T* g = grad_of(n, 1)) {
                for (std::size_t r = 0; r < rows; ++r) {
                    T acc = 0;
                    for (std::size_t i = 0; i < inner; ++i) acc += n.grad[r * inner + i];
                    g[r] += acc;
                }
            }
        };
    }
    return Tensor<T>(out);
}

template <typename T>
Tensor<T> silu(const Tensor<T>& x) {
    auto out = make_node<T>(x.shape(), "silu", {&x});
    auto xv = x.data();
    for (std::size_t i = 0; i < xv.size(); ++i) out->value[i] = xv[i] / (T(1) + std::exp(-xv[i]));
    if (out->requires_grad) {
        out->backward = [](Node<T>& n) {
            if (T* g = grad_of(n, 0)) {
                const auto& xv = n.parents[0]->value;
                for (std::size_t i = 0; i < n.grad.size(); ++i) {
                    T s = T(1) / (T(1) + std::exp(-xv[i]));
                    g[i] += n.grad[i] * s * (T(1) + xv[i] * (T(1) - s));
                }
            }
        };
    }
    return Tensor<T>(out);
}

template <typename T>
Tensor<T> linear(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias) {
    if (x.rank() != 2 || weight.rank() != 2 || weight.dim(1) != x.dim(1) || bias.rank() != 1 ||
        bias.dim(0) != weight.dim(0)) {
        shape_fail("linear", "x " + shape_str(x.shape()) + ", weight " + shape_str(weight.shape()) + ", bias " +
                                 shape_str(bias.shape()));
    }
    const int batch = x.dim(0), in = x.dim(1), outf = weight.dim(0);
    auto out = make_node<T>({batch, outf}, "linear", {&x, &weight, &bias});
    for (int b = 0; b < batch; ++b)
        for (int o = 0; o < outf; ++o) out->value[std::size_t(b) * outf + o] = bias.data()[o];
    gemm(false, true, batch, outf, in, T(1), x.data().data(), weight.data().data(), T(1), out->value.data());
    if (out->requires_grad) {
        out->backward = [batch, in, outf](Node<T>& n) {
            const T* dy = n.grad.data();
            if (T* g = grad_of(n, 0)) gemm(false, false, batch, in, outf, T(1), dy, n.parents[1]->value.data(), T(1), g);
            if (T* g = grad_of(n, 1)) gemm(true, false, outf, in, batch, T(1), dy, n.parents[0]->value.data(), T(1), g);
            if (T* g = grad_of(n, 2)) {
                for (int b = 0; b < batch; ++b)
                    for (int o = 0; o < outf; ++o) g[o] += dy[std::size_t(b) * outf + o];
            }
        };
    }
    return Tensor<T>(out);
}

template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias, int stride) {
    if (x.rank() != 4 || weight.rank() != 4 || weight.dim(1) != x.dim(1) || weight.dim(2) != weight.dim(3) ||
        weight.dim(2) % 2 == 0 || bias.rank() != 1 || bias.dim(0) != weight.dim(0) || (stride != 1 && stride != 2)) {
        shape_fail("conv2d", "x " + shape_str(x.shape()) + ", weight " + shape_str(weight.shape()) + ", bias " +
                                 shape_str(bias.shape()) + ", stride " + std::to_string(stride));
    }
    ConvGeometry g{x.dim(0), x.dim(1), x.dim(2), x.dim(3), weight.dim(0), weight.dim(2), stride, weight.dim(2) / 2, 0, 0};
    g.ho = (g.h + 2 * g.pad - g.k) / stride + 1;
    g.wo = (g.w + 2 * g.pad - g.k) / stride + 1;
    auto out = make_node<T>({g.n, g.o, g.ho, g.wo}, "conv2d", {&x, &weight, &bias});
    const int plane = g.ho * g.wo;
    {
        std::vector<T> col(std::size_t(g.ck()) * g.cols());
        std::vector<T> res(std::size_t(g.o) * g.cols());
        im2col(g, x.data().data(), col.data());
        gemm(false, false, g.o, g.cols(), g.ck(), T(1), weight.data().data(), col.data(), T(0), res.data());
        auto bv = bias.data();
        for (int n = 0; n < g.n; ++n)
            for (int o = 0; o < g.o; ++o) {
                const T* src = res.data() + std::size_t(o) * g.cols() + std::size_t(n) * plane;
                T* dst = out->value.data() + (std::size_t(n) * g.o + o) * plane;
                for (int i = 0; i < plane; ++i) dst[i] = src[i] + bv[o];
            }
    }
    if (out->requires_grad) {
        out->backward = [g, plane](Node<T>& n) {
            std::vector<T> dres(std::size_t(g.o) * g.cols());
            for (int b = 0; b < g.n; ++b)
                for (int o = 0; o < g.o; ++o) {
                    const T* src = n.grad.data() + (std::size_t(b) * g.o + o) * plane;
                    std::copy(src, src + plane, dres.data() + std::size_t(o) * g.cols() + std::size_t(b) * plane);
                }
            if (T* gb = grad_of(n, 2)) {
                for (int o = 0; o < g.o; ++o) {
                    T acc = 0;
                    const T* row = dres.data() + std::size_t(o) * g.cols();
                    for (int i = 0; i < g.cols(); ++i) acc += row[i];
                    gb[o] += acc;
                }
            }
            T* gx = grad_of(n, 0);
            T* gw = grad_of(n, 1);
            if (gw) {
                std::vector<T> col(std::size_t(g.ck()) * g.cols());
                im2col(g, n.parents[0]->value.data(), col.data());
                gemm(false, true, g.o, g.ck(), g.cols(), T(1), dres.data(), col.data(), T(1), gw);
            }
            if (gx) {
                std::vector<T> dcol(std::size_t(g.ck()) * g.cols());
                gemm(true, false, g.ck(), g.cols(), g.o, T(1), n.parents[1]->value.data(), dres.data(), T(0),
                     dcol.data());
                col2im(g, dcol.data(), gx);
            }
        };
    }
    return Tensor<T>(out);
}

template <typename T>
Tensor<T> upsample2x(const Tensor<T>& x) {
    if (x.rank() != 4) shape_fail("upsample2x", "expected NCHW, got " + shape_str(x.shape()));
    const int planes = x.dim(0) * x.dim(1), h = x.dim(2), w = x.dim(3);
    auto out = make_node<T>({x.dim(0), x.dim(1), 2 * h, 2 * w}, "upsample2x", {&x});
    auto xv = x.data();
    for (int p = 0; p < planes; ++p)
        for (int y = 0; y < 2 * h; ++y)
            for (int xx = 0; xx < 2 * w; ++xx)
                out->value[(std::size_t(p) * 2 * h + y) * 2 * w + xx] = xv[(std::size_t(p) * h + y / 2) * w + xx / 2];
    if (out->requires_grad) {
        out->backward = [planes, h, w](Node<T>& n) {
            if (T* g = grad_of(n, 0)) {
                for (int p = 0; p < planes; ++p)
                    for (int y = 0; y < 2 * h; ++y)
                        for (int xx = 0; xx < 2 * w; ++xx)
                            g[(std::size_t(p) * h + y / 2) * w + xx / 2] +=
                                n.grad[(std::size_t(p) * 2 * h + y) * 2 * w + xx];
            }
        };
    }
    return Tensor<T>(out);
}

template <typename T>
Tensor<T> group_norm(const Tensor<T>& x, const Tensor<T>& gamma, const Tensor<T>& beta, int groups, T eps) {
    if (x.rank() != 4 || groups <= 0 || x.dim(1) % groups != 0 || gamma.rank() != 1 || gamma.dim(0) != x.dim(1) ||
        beta.shape() != gamma.shape()) {
        shape_fail("group_norm", "x " + shape_str(x.shape()) + ", gamma " + shape_str(gamma.shape()) + ", groups " +
                                     std::to_string(groups));
    }
    const int batch = x.dim(0), channels = x.dim(1), per_group = channels / groups;
    const std::size_t hw = std::size_t(x.dim(2)) * x.dim(3);
    const std::size_t m = per_group * hw;
    auto out = make_node<T>(x.shape(), "group_norm", {&x, &gamma, &beta});
    std::vector<T> xhat(x.numel());
    std::vector<T> inv_std(std::size_t(batch) * groups);
    auto xv = x.data(), gv = gamma.data(), bv = beta.data();
    for (int b = 0; b < batch; ++b) {
        for (int grp = 0; grp < groups; ++grp) {
            std::size_t base = (std::size_t(b) * channels + std::size_t(grp) * per_group) * hw;
            double mean = 0.0;
            for (std::size_t i = 0; i < m; ++i) mean += xv[base + i];
            mean /= double(m);
            double var = 0.0;
            for (std::size_t i = 0; i < m; ++i) var += (xv[base + i] - mean) * (xv[base + i] - mean);
            var /= double(m);
            T istd = T(1.0 / std::sqrt(var + double(eps)));
            inv_std[std::size_t(b) * groups + grp] = istd;
            for (int c = 0; c < per_group; ++c) {
                int ch = grp * per_group + c;
                for (std::size_t i = 0; i < hw; ++i) {
                    std::size_t idx = base + c * hw + i;
                    xhat[idx] = T((xv[idx] - mean) * istd);
                    out->value[idx] = gv[ch] * xhat[idx] + bv[ch];
                }
            }
        }
    }
    if (out->requires_grad) {
        out->backward = [batch, channels, groups, per_group, hw, m, xhat = std::move(xhat),
                         inv_std = std::move(inv_std)](Node<T>& n) {
            const T* dy = n.grad.data();
            const auto& gv = n.parents[1]->value;
            T* gx = grad_of(n, 0);
            T* gg = grad_of(n, 1);
            T* gb = grad_of(n, 2);
            for (int b = 0; b < batch; ++b) {
                for (int grp = 0; grp < groups; ++grp) {
                    std::size_t base = (std::size_t(b) * channels + std::size_t(grp) * per_group) * hw;
                    double sum_d = 0.0, sum_dx = 0.0;
                    for (int c = 0; c < per_group; ++c) {
                        int ch = grp * per_group + c;
                        double dg = 0.0, db = 0.0;
                        for (std::size_t i = 0; i < hw; ++i) {
                            std::size_t idx = base + c * hw + i;
                            double d = double(dy[idx]) * gv[ch];
                            sum_d += d;
                            sum_dx += d * xhat[idx];
                            dg += double(dy[idx]) * xhat[idx];
                            db += dy[idx];
                        }
                        if (gg) gg[ch] += T(dg);
                        if (gb) gb[ch] += T(db);
                    }
                    if (!gx) continue;
                    double istd = inv_std[std::size_t(b) * groups + grp];
                    double mean_d = sum_d / double(m), mean_dx = sum_dx / double(m);
                    for (int c = 0; c < per_group; ++c) {
                        int ch = grp * per_group + c;
                        for (std::size_t i = 0; i < hw; ++i) {
                            std::size_t idx = base + c * hw + i;
                            double d = double(dy[idx]) * gv[ch];
                            gx[idx] += T(istd * (d - mean_d - xhat[idx] * mean_dx));
                        }
                    }
                }
            }
        };
    }
    return Tensor<T>(out);
}

template <typename T>
Tensor<T> concat(const std::vector<Tensor<T>>& parts) {
    if (parts.empty()) shape_fail("concat", "no inputs");
    Shape shape = parts[0].shape();
    if (shape.size() < 2) shape_fail("concat", "rank must be >= 2");
    int channels = 0;
    for (const auto& p : parts) {
        Shape s = p.shape();
        if (s.size() != shape.size()) shape_fail("concat", shape_str(s) + " vs " + shape_str(shape));
        for (std::size_t d = 0; d < s.size(); ++d) {
            if (d != 1 && s[d] != shape[d]) shape_fail("concat", shape_str(s) + " vs " + shape_str(shape));
        }
        channels += s[1];
    }
    shape[1] = channels;
    const int batch = shape[0];
    const std::size_t inner = numel(shape) / (std::size_t(batch) * channels);
    auto out = std::make_shared<Node<T>>();
    out->shape = shape;
    out->value.assign(numel(shape), T(0));
    out->op = "concat";
    if (grad_enabled()) {
        for (const auto& p : parts) out->requires_grad = out->requires_grad || p.requires_grad();
        if (out->requires_grad)
            for (const auto& p : parts) out->parents.push_back(p.node());
    }
    std::vector<int> widths;
    int offset = 0;
    for (const auto& p : parts) {
        int c = p.dim(1);
        widths.push_back(c);
        auto pv = p.data();
        for (int b = 0; b < batch; ++b) {
            std::copy(pv.begin() + std::size_t(b) * c * inner, pv.begin() + std::size_t(b + 1) * c * inner,
                      out->value.begin() + (std::size_t(b) * channels + offset) * inner);
        }
        offset += c;
    }
    if (out->requires_grad) {
        out->backward = [widths, batch, channels, inner](Node<T>& n) {
            int offset = 0;
            for (std::size_t k = 0; k < widths.size(); ++k) {
                int c = widths[k];
                if (T* g = grad_of(n, k)) {
                    for (int b = 0; b < batch; ++b) {
                        const T* src = n.grad.data() + (std::size_t(b) * channels + offset) * inner;
                        T* dst = g + std::size_t(b) * c * inner;
                        for (std::size_t i = 0; i < std::size_t(c) * inner; ++i) dst[i] += src[i];
                    }
                }
                offset += c;
            }
        };
    }
    return Tensor<T>(out);
}

template <typename T>
Tensor<T> sum(const Tensor<T>& x) {
    auto out = make_node<T>({1}, "sum", {&x});
    double acc = 0.0;
    for (T v : x.data()) acc += v;
    out->value[0] = T(acc);
    if (out->requires_grad) {
        out->backward = [](Node<T>& n) {
            if (T* g = grad_of(n, 0)) {
                for (std::size_t i = 0; i < n.parents[0]->value.size(); ++i) g[i] += n.grad[0];
            }
        };
    }
    return Tensor<T>(out);
}

template <typename T>
Tensor<T> mse_loss(const Tensor<T>& pred, const Tensor<T>& target) {
    same_shape("mse_loss", pred, target);
    auto out = make_node<T>({1}, "mse_loss", {&pred});
    auto pv = pred.data(), tv = target.data();
    double acc = 0.0;
    for (std::size_t i = 0; i < pv.size(); ++i) acc += double(pv[i] - tv[i]) * double(pv[i] - tv[i]);
    out->value[0] = T(acc / double(pv.size()));
    if (out->requires_grad) {
        std::vector<T> diff(pv.size());
        for (std::size_t i = 0; i < pv.size(); ++i) diff[i] = pv[i] - tv[i];
        out->backward = [diff = std::move(diff)](Node<T>& n) {
            if (T* g = grad_of(n, 0)) {
                T k = T(2) * n.grad[0] / T(diff.size());
                for (std::size_t i = 0; i < diff.size(); ++i) g[i] += k * diff[i];
            }
        };
    }
    return Tensor<T>(out);
}

#define UMBRA_INSTANTIATE_OPS(T)                                                                      \
    template Tensor<T> add(const Tensor<T>&, const Tensor<T>&);                                       \
    template Tensor<T> mul(const Tensor<T>&, const Tensor<T>&);                                       \
    template Tensor<T> scale(const Tensor<T>&, T);                                                    \
    template Tensor<T> add_per_channel(const Tensor<T>&, const Tensor<T>&);                           \
    template Tensor<T> silu(const Tensor<T>&);                                                        \
    template Tensor<T> linear(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);                  \
    template Tensor<T> conv2d(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, int);             \
    template Tensor<T> upsample2x(const Tensor<T>&);                                                  \
    template Tensor<T> group_norm(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, int, T);      \
    template Tensor<T> concat(const std::vector<Tensor<T>>&);                                         \
    template Tensor<T> sum(const Tensor<T>&);                                                         \
    template Tensor<T> mse_loss(const Tensor<T>&, const Tensor<T>&);

UMBRA_INSTANTIATE_OPS(float)
UMBRA_INSTANTIATE_OPS(double)

}  // namespace umbra::ad
