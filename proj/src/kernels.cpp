#include "voxplan/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "voxplan/parallel.hpp"

namespace voxplan::kernels {

namespace {
bool g_nan_checks = false;
}

void set_nan_checks(bool on) { g_nan_checks = on; }
bool nan_checks_enabled() { return g_nan_checks; }

template <typename T>
void check_finite(const Tensor<T>& t, const char* kernel) {
  const T* p = t.data();
  for (std::uint64_t i = 0; i < t.elems(); ++i) {
    if (!std::isfinite(p[i])) {
      throw std::runtime_error(std::string(kernel) + " produced a non-finite value at flat index " +
                               std::to_string(i));
    }
  }
}

namespace {

template <typename T>
void maybe_check(const Tensor<T>& t, const char* kernel) {
  if (g_nan_checks) check_finite(t, kernel);
}

template <typename T>
void check_conv_shapes(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias) {
  const TensorShape& ws = weight.shape();
  if (ws.n != ws.c || ws.c != ws.d) {
    throw std::invalid_argument("conv3d weight must be cubic (k,k,k,c_in,c_out), got " + ws.to_string());
  }
  if (ws.n % 2 == 0) throw std::invalid_argument("conv3d kernel size must be odd");
  if (input.shape().c != ws.h) {
    throw std::invalid_argument("conv3d input channels " + std::to_string(input.shape().c) +
                                " do not match weight c_in " + std::to_string(ws.h));
  }
  if (bias.elems() != static_cast<std::uint64_t>(ws.w)) {
    throw std::invalid_argument("conv3d bias length " + std::to_string(bias.elems()) +
                                " does not match c_out " + std::to_string(ws.w));
  }
}

}  // namespace

template <typename T>
Tensor<T> conv3d_forward(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias,
                         MemTracker* tracker) {
  check_conv_shapes(input, weight, bias);
  const TensorShape in = input.shape();
  const std::int64_t k = weight.shape().n;
  const std::int64_t ci_count = weight.shape().h;
  const std::int64_t co_count = weight.shape().w;
  const std::int64_t off = k / 2;
  const std::int64_t D = in.d, H = in.h, W = in.w;
  const std::int64_t dhw = D * H * W;

  Tensor<T> out(TensorShape{in.n, co_count, D, H, W}, tracker);
  const T* ip = input.data();
  const T* wp = weight.data();
  const T* bp = bias.data();
  T* op = out.data();

  parallel_for(in.n * co_count, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      const std::int64_t n = idx / co_count;
      const std::int64_t co = idx % co_count;
      T* out_slab = op + idx * dhw;
      const T bias_v = bp[co];
      for (std::int64_t i = 0; i < dhw; ++i) out_slab[i] = bias_v;
      for (std::int64_t ci = 0; ci < ci_count; ++ci) {
        const T* in_slab = ip + (n * ci_count + ci) * dhw;
        for (std::int64_t dz = 0; dz < k; ++dz) {
          const std::int64_t z0 = std::max<std::int64_t>(0, off - dz);
          const std::int64_t z1 = std::min<std::int64_t>(D, D + off - dz);
          for (std::int64_t dy = 0; dy < k; ++dy) {
            const std::int64_t y0 = std::max<std::int64_t>(0, off - dy);
            const std::int64_t y1 = std::min<std::int64_t>(H, H + off - dy);
            for (std::int64_t dx = 0; dx < k; ++dx) {
              const std::int64_t x0 = std::max<std::int64_t>(0, off - dx);
              const std::int64_t x1 = std::min<std::int64_t>(W, W + off - dx);
              const T wv = wp[(((dz * k + dy) * k + dx) * ci_count + ci) * co_count + co];
              const std::int64_t shift = (dz - off) * H * W + (dy - off) * W + (dx - off);
              for (std::int64_t z = z0; z < z1; ++z) {
                for (std::int64_t y = y0; y < y1; ++y) {
                  const std::int64_t row = (z * H + y) * W;
                  const T* src = in_slab + row + shift;
                  T* dst = out_slab + row;
                  for (std::int64_t x = x0; x < x1; ++x) dst[x] += wv * src[x];
                }
              }
            }
          }
        }
      }
    }
  });
  maybe_check(out, "conv3d_forward");
  return out;
}

template <typename T>
void conv3d_backward_acc(const Tensor<T>& grad_out, const Tensor<T>& input, const Tensor<T>& weight,
                         Tensor<T>& grad_input, Tensor<T>& grad_weight, Tensor<T>& grad_bias) {
  check_conv_shapes(input, weight, grad_bias);
  require_same_shape(grad_input, input, "conv3d_backward grad_input");
  require_same_shape(grad_weight, weight, "conv3d_backward grad_weight");
  const TensorShape in = input.shape();
  const std::int64_t k = weight.shape().n;
  const std::int64_t ci_count = weight.shape().h;
  const std::int64_t co_count = weight.shape().w;
  if (grad_out.shape().c != co_count || grad_out.shape().n != in.n || grad_out.shape().d != in.d ||
      grad_out.shape().h != in.h || grad_out.shape().w != in.w) {
    throw std::invalid_argument("conv3d_backward: grad_out shape " + grad_out.shape().to_string() +
                                " inconsistent with input " + in.to_string());
  }
  const std::int64_t off = k / 2;
  const std::int64_t D = in.d, H = in.h, W = in.w;
  const std::int64_t dhw = D * H * W;
  const T* gop = grad_out.data();
  const T* ip = input.data();
  const T* wp = weight.data();

  // d(loss)/d(input): mirrored stencil over grad_out
  T* gip = grad_input.data();
  parallel_for(in.n * ci_count, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      const std::int64_t n = idx / ci_count;
      const std::int64_t ci = idx % ci_count;
      T* gin_slab = gip + idx * dhw;
      for (std::int64_t co = 0; co < co_count; ++co) {
        const T* go_slab = gop + (n * co_count + co) * dhw;
        for (std::int64_t dz = 0; dz < k; ++dz) {
          const std::int64_t z0 = std::max<std::int64_t>(0, dz - off);
          const std::int64_t z1 = std::min<std::int64_t>(D, D + dz - off);
          for (std::int64_t dy = 0; dy < k; ++dy) {
            const std::int64_t y0 = std::max<std::int64_t>(0, dy - off);
            const std::int64_t y1 = std::min<std::int64_t>(H, H + dy - off);
            for (std::int64_t dx = 0; dx < k; ++dx) {
              const std::int64_t x0 = std::max<std::int64_t>(0, dx - off);
              const std::int64_t x1 = std::min<std::int64_t>(W, W + dx - off);
              const T wv = wp[(((dz * k + dy) * k + dx) * ci_count + ci) * co_count + co];
              const std::int64_t shift = (off - dz) * H * W + (off - dy) * W + (off - dx);
              for (std::int64_t z = z0; z < z1; ++z) {
                for (std::int64_t y = y0; y < y1; ++y) {
                  const std::int64_t row = (z * H + y) * W;
                  const T* src = go_slab + row + shift;
                  T* dst = gin_slab + row;
                  for (std::int64_t x = x0; x < x1; ++x) dst[x] += wv * src[x];
                }
              }
            }
          }
        }
      }
    }
  });

  // d(loss)/d(weight): one task per (c_in, c_out) pair; samples accumulate
  // in ascending order inside the task, keeping results independent of the
  // worker count
  T* gwp = grad_weight.data();
  parallel_for(ci_count * co_count, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      const std::int64_t ci = idx / co_count;
      const std::int64_t co = idx % co_count;
      for (std::int64_t dz = 0; dz < k; ++dz) {
        const std::int64_t z0 = std::max<std::int64_t>(0, off - dz);
        const std::int64_t z1 = std::min<std::int64_t>(D, D + off - dz);
        for (std::int64_t dy = 0; dy < k; ++dy) {
          const std::int64_t y0 = std::max<std::int64_t>(0, off - dy);
          const std::int64_t y1 = std::min<std::int64_t>(H, H + off - dy);
          for (std::int64_t dx = 0; dx < k; ++dx) {
            const std::int64_t x0 = std::max<std::int64_t>(0, off - dx);
            const std::int64_t x1 = std::min<std::int64_t>(W, W + off - dx);
            const std::int64_t shift = (dz - off) * H * W + (dy - off) * W + (dx - off);
            T acc = T(0);
            for (std::int64_t n = 0; n < in.n; ++n) {
              const T* in_slab = ip + (n * ci_count + ci) * dhw;
              const T* go_slab = gop + (n * co_count + co) * dhw;
              for (std::int64_t z = z0; z < z1; ++z) {
                for (std::int64_t y = y0; y < y1; ++y) {
                  const std::int64_t row = (z * H + y) * W;
                  const T* src = in_slab + row + shift;
                  const T* go = go_slab + row;
                  for (std::int64_t x = x0; x < x1; ++x) acc += src[x] * go[x];
                }
              }
            }
            gwp[(((dz * k + dy) * k + dx) * ci_count + ci) * co_count + co] += acc;
          }
        }
      }
    }
  });

  T* gbp = grad_bias.data();
  parallel_for(co_count, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t co = lo; co < hi; ++co) {
      T acc = T(0);
      for (std::int64_t n = 0; n < in.n; ++n) {
        const T* go_slab = gop + (n * co_count + co) * dhw;
        for (std::int64_t i = 0; i < dhw; ++i) acc += go_slab[i];
      }
      gbp[co] += acc;
    }
  });

  maybe_check(grad_input, "conv3d_backward");
  maybe_check(grad_weight, "conv3d_backward");
  maybe_check(grad_bias, "conv3d_backward");
}

template <typename T>
ConvGrads<T> conv3d_backward(const Tensor<T>& grad_out, const Tensor<T>& input,
                             const Tensor<T>& weight, MemTracker* tracker) {
  ConvGrads<T> g;
  g.input = Tensor<T>(input.shape(), tracker);
  g.weight = Tensor<T>(weight.shape(), tracker);
  g.bias = Tensor<T>(TensorShape{1, 1, 1, 1, weight.shape().w}, tracker);
  conv3d_backward_acc(grad_out, input, weight, g.input, g.weight, g.bias);
  return g;
}

template <typename T>
std::pair<Tensor<T>, Tensor<index_t<T>>> maxpool3d_forward(const Tensor<T>& input,
                                                           MemTracker* tracker) {
  const TensorShape in = input.shape();
  if (in.d % 2 != 0 || in.h % 2 != 0 || in.w % 2 != 0) {
    throw std::invalid_argument("maxpool3d requires even spatial dims, got " + in.to_string());
  }
  if (input.elems() > std::numeric_limits<index_t<T>>::max()) {
    throw std::invalid_argument("maxpool3d input too large for the argmax index type");
  }
  const TensorShape os{in.n, in.c, in.d / 2, in.h / 2, in.w / 2};
  Tensor<T> out(os, tracker);
  Tensor<index_t<T>> argmax(os, tracker);
  const std::int64_t in_dhw = in.d * in.h * in.w;
  const std::int64_t out_dhw = os.d * os.h * os.w;
  const T* ip = input.data();
  T* op = out.data();
  index_t<T>* ap = argmax.data();

  parallel_for(in.n * in.c, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t slab = lo; slab < hi; ++slab) {
      const T* in_slab = ip + slab * in_dhw;
      const std::uint64_t slab_base = static_cast<std::uint64_t>(slab) * static_cast<std::uint64_t>(in_dhw);
      T* out_slab = op + slab * out_dhw;
      index_t<T>* arg_slab = ap + slab * out_dhw;
      for (std::int64_t z = 0; z < os.d; ++z) {
        for (std::int64_t y = 0; y < os.h; ++y) {
          for (std::int64_t x = 0; x < os.w; ++x) {
            std::int64_t best_idx = ((2 * z) * in.h + (2 * y)) * in.w + (2 * x);
            T best = in_slab[best_idx];
            // ascending linear order; strict > keeps the lowest index on ties
            for (std::int64_t dz = 0; dz < 2; ++dz) {
              for (std::int64_t dy = 0; dy < 2; ++dy) {
                for (std::int64_t dx = 0; dx < 2; ++dx) {
                  const std::int64_t idx = ((2 * z + dz) * in.h + (2 * y + dy)) * in.w + (2 * x + dx);
                  if (in_slab[idx] > best) {
                    best = in_slab[idx];
                    best_idx = idx;
                  }
                }
              }
            }
            const std::int64_t o = (z * os.h + y) * os.w + x;
            out_slab[o] = best;
            arg_slab[o] = static_cast<index_t<T>>(slab_base + static_cast<std::uint64_t>(best_idx));
          }
        }
      }
    }
  });
  maybe_check(out, "maxpool3d_forward");
  return {std::move(out), std::move(argmax)};
}

template <typename T>
void maxpool3d_backward_acc(const Tensor<T>& grad_out, const Tensor<index_t<T>>& argmax,
                            Tensor<T>& grad_input) {
  if (!(grad_out.shape() == argmax.shape())) {
    throw std::invalid_argument("maxpool3d_backward: grad_out and argmax shapes differ");
  }
  const TensorShape os = grad_out.shape();
  const TensorShape in = grad_input.shape();
  if (in.n != os.n || in.c != os.c || in.d != os.d * 2 || in.h != os.h * 2 || in.w != os.w * 2) {
    throw std::invalid_argument("maxpool3d_backward: grad_input shape " + in.to_string() +
                                " inconsistent with grad_out " + os.to_string());
  }
  const std::int64_t out_dhw = os.d * os.h * os.w;
  const T* gop = grad_out.data();
  const index_t<T>* ap = argmax.data();
  T* gip = grad_input.data();
  // scatter targets stay inside the task's (n, c) slab
  parallel_for(os.n * os.c, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t slab = lo; slab < hi; ++slab) {
      const T* go = gop + slab * out_dhw;
      const index_t<T>* arg = ap + slab * out_dhw;
      for (std::int64_t i = 0; i < out_dhw; ++i) {
        gip[arg[i]] += go[i];
      }
    }
  });
  maybe_check(grad_input, "maxpool3d_backward");
}

template <typename T>
Tensor<T> maxpool3d_backward(const Tensor<T>& grad_out, const Tensor<index_t<T>>& argmax,
                             const TensorShape& input_shape, MemTracker* tracker) {
  Tensor<T> grad_input(input_shape, tracker);
  maxpool3d_backward_acc(grad_out, argmax, grad_input);
  return grad_input;
}

template <typename T>
Tensor<T> upsample3d_forward(const Tensor<T>& input, MemTracker* tracker) {
  const TensorShape in = input.shape();
  const TensorShape os{in.n, in.c, in.d * 2, in.h * 2, in.w * 2};
  Tensor<T> out(os, tracker);
  const std::int64_t in_dhw = in.d * in.h * in.w;
  const std::int64_t out_dhw = os.d * os.h * os.w;
  const T* ip = input.data();
  T* op = out.data();
  parallel_for(in.n * in.c, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t slab = lo; slab < hi; ++slab) {
      const T* in_slab = ip + slab * in_dhw;
      T* out_slab = op + slab * out_dhw;
      for (std::int64_t z = 0; z < os.d; ++z) {
        for (std::int64_t y = 0; y < os.h; ++y) {
          const T* src = in_slab + ((z / 2) * in.h + (y / 2)) * in.w;
          T* dst = out_slab + (z * os.h + y) * os.w;
          for (std::int64_t x = 0; x < os.w; ++x) dst[x] = src[x / 2];
        }
      }
    }
  });
  maybe_check(out, "upsample3d_forward");
  return out;
}

template <typename T>
void upsample3d_backward_acc(const Tensor<T>& grad_out, Tensor<T>& grad_input) {
  const TensorShape os = grad_out.shape();
  const TensorShape in = grad_input.shape();
  if (in.n != os.n || in.c != os.c || in.d * 2 != os.d || in.h * 2 != os.h || in.w * 2 != os.w) {
    throw std::invalid_argument("upsample3d_backward: grad_input shape " + in.to_string() +
                                " inconsistent with grad_out " + os.to_string());
  }
  const std::int64_t in_dhw = in.d * in.h * in.w;
  const std::int64_t out_dhw = os.d * os.h * os.w;
  const T* gop = grad_out.data();
  T* gip = grad_input.data();
  parallel_for(in.n * in.c, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t slab = lo; slab < hi; ++slab) {
      const T* go_slab = gop + slab * out_dhw;
      T* gin_slab = gip + slab * in_dhw;
      for (std::int64_t z = 0; z < in.d; ++z) {
        for (std::int64_t y = 0; y < in.h; ++y) {
          T* dst = gin_slab + (z * in.h + y) * in.w;
          for (std::int64_t x = 0; x < in.w; ++x) {
            T acc = T(0);
            for (std::int64_t dz = 0; dz < 2; ++dz) {
              for (std::int64_t dy = 0; dy < 2; ++dy) {
                const T* src = go_slab + ((2 * z + dz) * os.h + (2 * y + dy)) * os.w + 2 * x;
                acc += src[0];
                acc += src[1];
              }
            }
            dst[x] += acc;
          }
        }
      }
    }
  });
  maybe_check(grad_input, "upsample3d_backward");
}

template <typename T>
Tensor<T> upsample3d_backward(const Tensor<T>& grad_out, MemTracker* tracker) {
  const TensorShape os = grad_out.shape();
  if (os.d % 2 != 0 || os.h % 2 != 0 || os.w % 2 != 0) {
    throw std::invalid_argument("upsample3d_backward: grad_out dims must be even");
  }
  Tensor<T> grad_input(TensorShape{os.n, os.c, os.d / 2, os.h / 2, os.w / 2}, tracker);
  upsample3d_backward_acc(grad_out, grad_input);
  return grad_input;
}

template <typename T>
Tensor<T> relu_forward(const Tensor<T>& input, MemTracker* tracker) {
  Tensor<T> out(input.shape(), tracker);
  const T* ip = input.data();
  T* op = out.data();
  parallel_for(static_cast<std::int64_t>(input.elems()), [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) op[i] = ip[i] > T(0) ? ip[i] : T(0);
  });
  maybe_check(out, "relu_forward");
  return out;
}

template <typename T>
void relu_backward_acc(const Tensor<T>& grad_out, const Tensor<T>& output, Tensor<T>& grad_input) {
  require_same_shape(grad_out, output, "relu_backward");
  require_same_shape(grad_out, grad_input, "relu_backward");
  const T* gop = grad_out.data();
  const T* op = output.data();
  T* gip = grad_input.data();
  parallel_for(static_cast<std::int64_t>(grad_out.elems()), [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      if (op[i] > T(0)) gip[i] += gop[i];
    }
  });
  maybe_check(grad_input, "relu_backward");
}

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& grad_out, const Tensor<T>& output, MemTracker* tracker) {
  Tensor<T> grad_input(grad_out.shape(), tracker);
  relu_backward_acc(grad_out, output, grad_input);
  return grad_input;
}

template <typename T>
Tensor<T> sigmoid_forward(const Tensor<T>& input, MemTracker* tracker) {
  Tensor<T> out(input.shape(), tracker);
  const T* ip = input.data();
  T* op = out.data();
  parallel_for(static_cast<std::int64_t>(input.elems()), [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) op[i] = T(1) / (T(1) + std::exp(-ip[i]));
  });
  maybe_check(out, "sigmoid_forward");
  return out;
}

template <typename T>
void sigmoid_backward_acc(const Tensor<T>& grad_out, const Tensor<T>& output,
                          Tensor<T>& grad_input) {
  require_same_shape(grad_out, output, "sigmoid_backward");
  require_same_shape(grad_out, grad_input, "sigmoid_backward");
  const T* gop = grad_out.data();
  const T* op = output.data();
  T* gip = grad_input.data();
  parallel_for(static_cast<std::int64_t>(grad_out.elems()), [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) gip[i] += gop[i] * op[i] * (T(1) - op[i]);
  });
  maybe_check(grad_input, "sigmoid_backward");
}

template <typename T>
Tensor<T> sigmoid_backward(const Tensor<T>& grad_out, const Tensor<T>& output, MemTracker* tracker) {
  Tensor<T> grad_input(grad_out.shape(), tracker);
  sigmoid_backward_acc(grad_out, output, grad_input);
  return grad_input;
}

template <typename T>
Tensor<T> concat_forward(const std::vector<const Tensor<T>*>& inputs, MemTracker* tracker) {
  if (inputs.size() < 2) throw std::invalid_argument("concat expects at least 2 inputs");
  TensorShape os = inputs[0]->shape();
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    const TensorShape& s = inputs[i]->shape();
    if (s.n != os.n || s.d != os.d || s.h != os.h || s.w != os.w) {
      throw std::invalid_argument("concat inputs disagree on (n,d,h,w): " + os.to_string() +
                                  " vs " + s.to_string());
    }
    os.c += s.c;
  }
  Tensor<T> out(os, tracker);
  const std::int64_t dhw = os.d * os.h * os.w;
  T* op = out.data();
  for (std::int64_t n = 0; n < os.n; ++n) {
    std::int64_t c_base = 0;
    for (const Tensor<T>* in : inputs) {
      const std::int64_t c = in->shape().c;
      std::memcpy(op + (n * os.c + c_base) * dhw, in->data() + n * c * dhw,
                  static_cast<std::size_t>(c * dhw) * sizeof(T));
      c_base += c;
    }
  }
  maybe_check(out, "concat_forward");
  return out;
}

template <typename T>
void concat_backward_acc(const Tensor<T>& grad_out, const std::vector<Tensor<T>*>& grad_inputs) {
  const TensorShape os = grad_out.shape();
  std::int64_t c_total = 0;
  for (const Tensor<T>* g : grad_inputs) c_total += g->shape().c;
  if (c_total != os.c) {
    throw std::invalid_argument("concat_backward: channel counts do not partition grad_out");
  }
  const std::int64_t dhw = os.d * os.h * os.w;
  const T* gop = grad_out.data();
  for (std::int64_t n = 0; n < os.n; ++n) {
    std::int64_t c_base = 0;
    for (Tensor<T>* g : grad_inputs) {
      const std::int64_t c = g->shape().c;
      const T* src = gop + (n * os.c + c_base) * dhw;
      T* dst = g->data() + n * c * dhw;
      for (std::int64_t i = 0; i < c * dhw; ++i) dst[i] += src[i];
      c_base += c;
    }
  }
}

template <typename T>
std::vector<Tensor<T>> concat_backward(const Tensor<T>& grad_out,
                                       const std::vector<TensorShape>& input_shapes,
                                       MemTracker* tracker) {
  std::vector<Tensor<T>> grads;
  std::vector<Tensor<T>*> ptrs;
  grads.reserve(input_shapes.size());
  for (const TensorShape& s : input_shapes) grads.emplace_back(s, tracker);
  for (Tensor<T>& g : grads) ptrs.push_back(&g);
  concat_backward_acc(grad_out, ptrs);
  return grads;
}

#define VOXPLAN_INSTANTIATE(T)                                                                     \
  template void check_finite<T>(const Tensor<T>&, const char*);                                    \
  template Tensor<T> conv3d_forward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,       \
                                       MemTracker*);                                               \
  template void conv3d_backward_acc<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,       \
                                       Tensor<T>&, Tensor<T>&, Tensor<T>&);                        \
  template ConvGrads<T> conv3d_backward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,   \
                                           MemTracker*);                                           \
  template std::pair<Tensor<T>, Tensor<index_t<T>>> maxpool3d_forward<T>(const Tensor<T>&,         \
                                                                         MemTracker*);             \
  template void maxpool3d_backward_acc<T>(const Tensor<T>&, const Tensor<index_t<T>>&,             \
                                          Tensor<T>&);                                             \
  template Tensor<T> maxpool3d_backward<T>(const Tensor<T>&, const Tensor<index_t<T>>&,            \
                                           const TensorShape&, MemTracker*);                       \
  template Tensor<T> upsample3d_forward<T>(const Tensor<T>&, MemTracker*);                         \
  template void upsample3d_backward_acc<T>(const Tensor<T>&, Tensor<T>&);                          \
  template Tensor<T> upsample3d_backward<T>(const Tensor<T>&, MemTracker*);                        \
  template Tensor<T> relu_forward<T>(const Tensor<T>&, MemTracker*);                               \
  template void relu_backward_acc<T>(const Tensor<T>&, const Tensor<T>&, Tensor<T>&);              \
  template Tensor<T> relu_backward<T>(const Tensor<T>&, const Tensor<T>&, MemTracker*);            \
  template Tensor<T> sigmoid_forward<T>(const Tensor<T>&, MemTracker*);                            \
  template void sigmoid_backward_acc<T>(const Tensor<T>&, const Tensor<T>&, Tensor<T>&);           \
  template Tensor<T> sigmoid_backward<T>(const Tensor<T>&, const Tensor<T>&, MemTracker*);         \
  template Tensor<T> concat_forward<T>(const std::vector<const Tensor<T>*>&, MemTracker*);         \
  template void concat_backward_acc<T>(const Tensor<T>&, const std::vector<Tensor<T>*>&);          \
  template std::vector<Tensor<T>> concat_backward<T>(const Tensor<T>&,                             \
                                                     const std::vector<TensorShape>&, MemTracker*);

VOXPLAN_INSTANTIATE(float)
VOXPLAN_INSTANTIATE(double)

#undef VOXPLAN_INSTANTIATE

}  // namespace voxplan::kernels
