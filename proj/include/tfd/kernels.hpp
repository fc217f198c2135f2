#pragma once
// Arithmetic kernel core. Every kernel has a scalar reference implementation
// (any element type) and an AVX2 float variant selected at runtime; the two
// are equivalence-tested against each other. Reductions accumulate in double
// with a fixed (thread-count independent) order.

#include <cmath>
#include <cstdint>

namespace tfd::kern {

enum class Backend { scalar, avx2 };

bool avx2_supported();
Backend active_backend();
// Throws tfd::Error(usage) when the backend is not supported on this CPU.
// Env override: TFD_KERNELS=scalar|avx2|auto (read once at startup).
void set_backend(Backend b);
const char* backend_name(Backend b);

// ---- dispatched float fast path ------------------------------------------

// C[n x m] (+)= A[n x k] * B[k x m], all row-major.
void gemm_ab(const float* a, const float* b, float* c, int64_t n, int64_t k,
             int64_t m, bool accumulate);
// C[n x k] (+)= A[n x m] * B[k x m]^T  (pairwise row dots), all row-major.
void gemm_abt(const float* a, const float* b, float* c, int64_t n, int64_t m,
              int64_t k, bool accumulate);
void axpy(int64_t n, float alpha, const float* x, float* y);
void scale(int64_t n, float alpha, float* x);
void relu(int64_t n, const float* x, float* y);
// dx = (y > 0) ? dy : 0, with y the forward output.
void relu_bwd(int64_t n, const float* y, const float* dy, float* dx);
double reduce_sum(int64_t n, const float* x);
double reduce_sumsq(int64_t n, const float* x);
// y = a*x + b
void affine(int64_t n, float a, float b, const float* x, float* y);
// Decoupled-weight-decay adaptive-moment step.
// m <- b1*m + (1-b1)*g ; v <- b2*v + (1-b2)*g^2
// p <- p - lr*( (m*bc1inv) / (sqrt(v)*bc2rsqrt + eps) + wd*p )
void adamw(int64_t n, float* p, const float* g, float* m, float* v, float lr,
           float b1, float b2, float eps, float wd, float bc1inv,
           float bc2rsqrt);

// ---- scalar reference (any precision; the double path for gradient checks)

namespace ref {

template <typename T>
void gemm_ab(const T* a, const T* b, T* c, int64_t n, int64_t k, int64_t m,
             bool accumulate) {
  for (int64_t i = 0; i < n; ++i) {
    T* crow = c + i * m;
    if (!accumulate) {
      for (int64_t j = 0; j < m; ++j) crow[j] = T(0);
    }
    const T* arow = a + i * k;
    for (int64_t p = 0; p < k; ++p) {
      const T av = arow[p];
      const T* brow = b + p * m;
      for (int64_t j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

template <typename T>
void gemm_abt(const T* a, const T* b, T* c, int64_t n, int64_t m, int64_t k,
              bool accumulate) {
  for (int64_t i = 0; i < n; ++i) {
    const T* arow = a + i * m;
    for (int64_t p = 0; p < k; ++p) {
      const T* brow = b + p * m;
      T acc = T(0);
      for (int64_t j = 0; j < m; ++j) acc += arow[j] * brow[j];
      if (accumulate)
        c[i * k + p] += acc;
      else
        c[i * k + p] = acc;
    }
  }
}

template <typename T>
void axpy(int64_t n, T alpha, const T* x, T* y) {
  for (int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <typename T>
void scale(int64_t n, T alpha, T* x) {
  for (int64_t i = 0; i < n; ++i) x[i] *= alpha;
}

template <typename T>
void relu(int64_t n, const T* x, T* y) {
  for (int64_t i = 0; i < n; ++i) y[i] = x[i] > T(0) ? x[i] : T(0);
}

template <typename T>
void relu_bwd(int64_t n, const T* y, const T* dy, T* dx) {
  for (int64_t i = 0; i < n; ++i) dx[i] = y[i] > T(0) ? dy[i] : T(0);
}

template <typename T>
double reduce_sum(int64_t n, const T* x) {
  double s = 0.0;
  for (int64_t i = 0; i < n; ++i) s += static_cast<double>(x[i]);
  return s;
}

template <typename T>
double reduce_sumsq(int64_t n, const T* x) {
  double s = 0.0;
  for (int64_t i = 0; i < n; ++i)
    s += static_cast<double>(x[i]) * static_cast<double>(x[i]);
  return s;
}

template <typename T>
void affine(int64_t n, T a, T b, const T* x, T* y) {
  for (int64_t i = 0; i < n; ++i) y[i] = a * x[i] + b;
}

template <typename T>
void adamw(int64_t n, T* p, const T* g, T* m, T* v, T lr, T b1, T b2, T eps,
           T wd, T bc1inv, T bc2rsqrt) {
  for (int64_t i = 0; i < n; ++i) {
    m[i] = b1 * m[i] + (T(1) - b1) * g[i];
    v[i] = b2 * v[i] + (T(1) - b2) * g[i] * g[i];
    const T mhat = m[i] * bc1inv;
    const T denom = std::sqrt(v[i]) * bc2rsqrt + eps;
    p[i] -= lr * (mhat / denom + wd * p[i]);
  }
}

}  // namespace ref

}  // namespace tfd::kern
