// AVX2+FMA kernel variants, compiled with per-function target attributes so
// the translation unit builds for a generic baseline and the fast paths are
// chosen at runtime (kernels.cpp vtable).

#include <cmath>
#include <cstdint>
#include <cstdlib>

#if defined(__x86_64__) || defined(__i386__)
#define TFD_X86 1
#include <immintrin.h>
#define TFD_TGT __attribute__((target("avx2,fma")))
#else
#define TFD_X86 0
#define TFD_TGT
#endif

namespace tfd::kern::avx2 {

#if TFD_X86

bool supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

TFD_TGT inline void gemm_ab_row1(const float* a, const float* b, float* c,
                                 int64_t k, int64_t m, bool acc) {
  int64_t j = 0;
  for (; j + 16 <= m; j += 16) {
    __m256 c0 = acc ? _mm256_loadu_ps(c + j) : _mm256_setzero_ps();
    __m256 c1 = acc ? _mm256_loadu_ps(c + j + 8) : _mm256_setzero_ps();
    for (int64_t p = 0; p < k; ++p) {
      const __m256 av = _mm256_set1_ps(a[p]);
      const float* bp = b + p * m + j;
      c0 = _mm256_fmadd_ps(av, _mm256_loadu_ps(bp), c0);
      c1 = _mm256_fmadd_ps(av, _mm256_loadu_ps(bp + 8), c1);
    }
    _mm256_storeu_ps(c + j, c0);
    _mm256_storeu_ps(c + j + 8, c1);
  }
  for (; j + 8 <= m; j += 8) {
    __m256 c0 = acc ? _mm256_loadu_ps(c + j) : _mm256_setzero_ps();
    for (int64_t p = 0; p < k; ++p)
      c0 = _mm256_fmadd_ps(_mm256_set1_ps(a[p]), _mm256_loadu_ps(b + p * m + j), c0);
    _mm256_storeu_ps(c + j, c0);
  }
  for (; j < m; ++j) {
    float s = acc ? c[j] : 0.0f;
    for (int64_t p = 0; p < k; ++p) s += a[p] * b[p * m + j];
    c[j] = s;
  }
}

// Processes 4 output rows over columns [0, j_end); j_end must be a multiple
// of 16. m is the row stride of b and c.
TFD_TGT inline void gemm_ab_row4(const float* a, const float* b, float* c,
                                 int64_t k, int64_t m, int64_t j_end,
                                 bool acc) {
  const float* a0 = a;
  const float* a1 = a + k;
  const float* a2 = a + 2 * k;
  const float* a3 = a + 3 * k;
  float* c0 = c;
  float* c1 = c + m;
  float* c2 = c + 2 * m;
  float* c3 = c + 3 * m;
  for (int64_t j = 0; j < j_end; j += 16) {
    __m256 v00, v01, v10, v11, v20, v21, v30, v31;
    if (acc) {
      v00 = _mm256_loadu_ps(c0 + j); v01 = _mm256_loadu_ps(c0 + j + 8);
      v10 = _mm256_loadu_ps(c1 + j); v11 = _mm256_loadu_ps(c1 + j + 8);
      v20 = _mm256_loadu_ps(c2 + j); v21 = _mm256_loadu_ps(c2 + j + 8);
      v30 = _mm256_loadu_ps(c3 + j); v31 = _mm256_loadu_ps(c3 + j + 8);
    } else {
      v00 = v01 = v10 = v11 = v20 = v21 = v30 = v31 = _mm256_setzero_ps();
    }
    for (int64_t p = 0; p < k; ++p) {
      const float* bp = b + p * m + j;
      const __m256 b0 = _mm256_loadu_ps(bp);
      const __m256 b1 = _mm256_loadu_ps(bp + 8);
      __m256 av;
      av = _mm256_set1_ps(a0[p]);
      v00 = _mm256_fmadd_ps(av, b0, v00); v01 = _mm256_fmadd_ps(av, b1, v01);
      av = _mm256_set1_ps(a1[p]);
      v10 = _mm256_fmadd_ps(av, b0, v10); v11 = _mm256_fmadd_ps(av, b1, v11);
      av = _mm256_set1_ps(a2[p]);
      v20 = _mm256_fmadd_ps(av, b0, v20); v21 = _mm256_fmadd_ps(av, b1, v21);
      av = _mm256_set1_ps(a3[p]);
      v30 = _mm256_fmadd_ps(av, b0, v30); v31 = _mm256_fmadd_ps(av, b1, v31);
    }
    _mm256_storeu_ps(c0 + j, v00); _mm256_storeu_ps(c0 + j + 8, v01);
    _mm256_storeu_ps(c1 + j, v10); _mm256_storeu_ps(c1 + j + 8, v11);
    _mm256_storeu_ps(c2 + j, v20); _mm256_storeu_ps(c2 + j + 8, v21);
    _mm256_storeu_ps(c3 + j, v30); _mm256_storeu_ps(c3 + j + 8, v31);
  }
}

TFD_TGT inline double hsum(__m256d v) {
  double buf[4];
  _mm256_storeu_pd(buf, v);
  return ((buf[0] + buf[1]) + buf[2]) + buf[3];
}

TFD_TGT inline float hsum8(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  lo = _mm_hadd_ps(lo, lo);
  lo = _mm_hadd_ps(lo, lo);
  return _mm_cvtss_f32(lo);
}

}  // namespace

TFD_TGT void gemm_ab(const float* a, const float* b, float* c, int64_t n,
                     int64_t k, int64_t m, bool accumulate) {
  int64_t i = 0;
  const int64_t m16 = m - m % 16;
  for (; i + 4 <= n; i += 4) {
    gemm_ab_row4(a + i * k, b, c + i * m, k, m, m16, accumulate);
    if (m16 < m) {
      // column tail per row
      for (int r = 0; r < 4; ++r) {
        const float* ar = a + (i + r) * k;
        float* cr = c + (i + r) * m;
        for (int64_t j = m16; j < m; ++j) {
          float s = accumulate ? cr[j] : 0.0f;
          for (int64_t p = 0; p < k; ++p) s += ar[p] * b[p * m + j];
          cr[j] = s;
        }
      }
    }
  }
  for (; i < n; ++i) gemm_ab_row1(a + i * k, b, c + i * m, k, m, accumulate);
}

TFD_TGT void gemm_abt(const float* a, const float* b, float* c, int64_t n,
                      int64_t m, int64_t k, bool accumulate) {
  for (int64_t i = 0; i < n; ++i) {
    const float* arow = a + i * m;
    for (int64_t p = 0; p < k; ++p) {
      const float* brow = b + p * m;
      __m256 s0 = _mm256_setzero_ps();
      __m256 s1 = _mm256_setzero_ps();
      __m256 s2 = _mm256_setzero_ps();
      __m256 s3 = _mm256_setzero_ps();
      int64_t j = 0;
      for (; j + 32 <= m; j += 32) {
        s0 = _mm256_fmadd_ps(_mm256_loadu_ps(arow + j), _mm256_loadu_ps(brow + j), s0);
        s1 = _mm256_fmadd_ps(_mm256_loadu_ps(arow + j + 8), _mm256_loadu_ps(brow + j + 8), s1);
        s2 = _mm256_fmadd_ps(_mm256_loadu_ps(arow + j + 16), _mm256_loadu_ps(brow + j + 16), s2);
        s3 = _mm256_fmadd_ps(_mm256_loadu_ps(arow + j + 24), _mm256_loadu_ps(brow + j + 24), s3);
      }
      for (; j + 8 <= m; j += 8)
        s0 = _mm256_fmadd_ps(_mm256_loadu_ps(arow + j), _mm256_loadu_ps(brow + j), s0);
      float s = hsum8(_mm256_add_ps(_mm256_add_ps(s0, s1), _mm256_add_ps(s2, s3)));
      for (; j < m; ++j) s += arow[j] * brow[j];
      if (accumulate)
        c[i * k + p] += s;
      else
        c[i * k + p] = s;
    }
  }
}

TFD_TGT void axpy(int64_t n, float alpha, const float* x, float* y) {
  const __m256 av = _mm256_set1_ps(alpha);
  int64_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(y + i, _mm256_fmadd_ps(av, _mm256_loadu_ps(x + i),
                                            _mm256_loadu_ps(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

TFD_TGT void scale(int64_t n, float alpha, float* x) {
  const __m256 av = _mm256_set1_ps(alpha);
  int64_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(x + i, _mm256_mul_ps(av, _mm256_loadu_ps(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

TFD_TGT void relu(int64_t n, const float* x, float* y) {
  const __m256 z = _mm256_setzero_ps();
  int64_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(y + i, _mm256_max_ps(z, _mm256_loadu_ps(x + i)));
  for (; i < n; ++i) y[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

TFD_TGT void relu_bwd(int64_t n, const float* y, const float* dy, float* dx) {
  const __m256 z = _mm256_setzero_ps();
  int64_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 mask = _mm256_cmp_ps(_mm256_loadu_ps(y + i), z, _CMP_GT_OQ);
    _mm256_storeu_ps(dx + i, _mm256_and_ps(mask, _mm256_loadu_ps(dy + i)));
  }
  for (; i < n; ++i) dx[i] = y[i] > 0.0f ? dy[i] : 0.0f;
}

TFD_TGT double reduce_sum(int64_t n, const float* x) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  int64_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 v = _mm256_loadu_ps(x + i);
    s0 = _mm256_add_pd(s0, _mm256_cvtps_pd(_mm256_castps256_ps128(v)));
    s1 = _mm256_add_pd(s1, _mm256_cvtps_pd(_mm256_extractf128_ps(v, 1)));
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += static_cast<double>(x[i]);
  return s;
}

TFD_TGT double reduce_sumsq(int64_t n, const float* x) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  int64_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 v = _mm256_loadu_ps(x + i);
    const __m256d lo = _mm256_cvtps_pd(_mm256_castps256_ps128(v));
    const __m256d hi = _mm256_cvtps_pd(_mm256_extractf128_ps(v, 1));
    s0 = _mm256_fmadd_pd(lo, lo, s0);
    s1 = _mm256_fmadd_pd(hi, hi, s1);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += static_cast<double>(x[i]) * static_cast<double>(x[i]);
  return s;
}

TFD_TGT void affine(int64_t n, float a, float b, const float* x, float* y) {
  const __m256 av = _mm256_set1_ps(a);
  const __m256 bv = _mm256_set1_ps(b);
  int64_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(y + i, _mm256_fmadd_ps(av, _mm256_loadu_ps(x + i), bv));
  for (; i < n; ++i) y[i] = a * x[i] + b;
}

TFD_TGT void adamw(int64_t n, float* p, const float* g, float* m, float* v,
                   float lr, float b1, float b2, float eps, float wd,
                   float bc1inv, float bc2rsqrt) {
  const __m256 vb1 = _mm256_set1_ps(b1);
  const __m256 vb1c = _mm256_set1_ps(1.0f - b1);
  const __m256 vb2 = _mm256_set1_ps(b2);
  const __m256 vb2c = _mm256_set1_ps(1.0f - b2);
  const __m256 veps = _mm256_set1_ps(eps);
  const __m256 vlr = _mm256_set1_ps(lr);
  const __m256 vwd = _mm256_set1_ps(wd);
  const __m256 vbc1 = _mm256_set1_ps(bc1inv);
  const __m256 vbc2 = _mm256_set1_ps(bc2rsqrt);
  int64_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 gv = _mm256_loadu_ps(g + i);
    __m256 mv = _mm256_loadu_ps(m + i);
    __m256 vv = _mm256_loadu_ps(v + i);
    mv = _mm256_fmadd_ps(vb1, mv, _mm256_mul_ps(vb1c, gv));
    vv = _mm256_fmadd_ps(vb2, vv, _mm256_mul_ps(vb2c, _mm256_mul_ps(gv, gv)));
    _mm256_storeu_ps(m + i, mv);
    _mm256_storeu_ps(v + i, vv);
    const __m256 mhat = _mm256_mul_ps(mv, vbc1);
    const __m256 denom = _mm256_fmadd_ps(_mm256_sqrt_ps(vv), vbc2, veps);
    __m256 pv = _mm256_loadu_ps(p + i);
    const __m256 upd = _mm256_fmadd_ps(vwd, pv, _mm256_div_ps(mhat, denom));
    pv = _mm256_fnmadd_ps(vlr, upd, pv);
    _mm256_storeu_ps(p + i, pv);
  }
  for (; i < n; ++i) {
    m[i] = b1 * m[i] + (1.0f - b1) * g[i];
    v[i] = b2 * v[i] + (1.0f - b2) * g[i] * g[i];
    const float mhat = m[i] * bc1inv;
    const float denom = std::sqrt(v[i]) * bc2rsqrt + eps;
    p[i] -= lr * (mhat / denom + wd * p[i]);
  }
}

#else  // !TFD_X86

bool supported() { return false; }

// Non-x86 builds never select this backend; the symbols only need to exist.
#define TFD_STUB { std::abort(); }
void gemm_ab(const float*, const float*, float*, int64_t, int64_t, int64_t, bool) TFD_STUB
void gemm_abt(const float*, const float*, float*, int64_t, int64_t, int64_t, bool) TFD_STUB
void axpy(int64_t, float, const float*, float*) TFD_STUB
void scale(int64_t, float, float*) TFD_STUB
void relu(int64_t, const float*, float*) TFD_STUB
void relu_bwd(int64_t, const float*, const float*, float*) TFD_STUB
double reduce_sum(int64_t, const float*) TFD_STUB
double reduce_sumsq(int64_t, const float*) TFD_STUB
void affine(int64_t, float, float, const float*, float*) TFD_STUB
void adamw(int64_t, float*, const float*, float*, float*, float, float, float,
           float, float, float, float) TFD_STUB
#undef TFD_STUB

#endif

}  // namespace tfd::kern::avx2
