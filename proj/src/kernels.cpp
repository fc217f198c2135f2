#include "tfd/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "tfd/errors.hpp"

namespace tfd::kern {

// AVX2 variants (kernels_avx2.cpp); compiled for x86-64, selected at runtime.
namespace avx2 {
void gemm_ab(const float*, const float*, float*, int64_t, int64_t, int64_t, bool);
void gemm_abt(const float*, const float*, float*, int64_t, int64_t, int64_t, bool);
void axpy(int64_t, float, const float*, float*);
void scale(int64_t, float, float*);
void relu(int64_t, const float*, float*);
void relu_bwd(int64_t, const float*, const float*, float*);
double reduce_sum(int64_t, const float*);
double reduce_sumsq(int64_t, const float*);
void affine(int64_t, float, float, const float*, float*);
void adamw(int64_t, float*, const float*, float*, float*, float, float, float,
           float, float, float, float);
bool supported();
}  // namespace avx2

namespace {

struct Vtable {
  void (*gemm_ab)(const float*, const float*, float*, int64_t, int64_t, int64_t, bool);
  void (*gemm_abt)(const float*, const float*, float*, int64_t, int64_t, int64_t, bool);
  void (*axpy)(int64_t, float, const float*, float*);
  void (*scale)(int64_t, float, float*);
  void (*relu)(int64_t, const float*, float*);
  void (*relu_bwd)(int64_t, const float*, const float*, float*);
  double (*reduce_sum)(int64_t, const float*);
  double (*reduce_sumsq)(int64_t, const float*);
  void (*affine)(int64_t, float, float, const float*, float*);
  void (*adamw)(int64_t, float*, const float*, float*, float*, float, float,
                float, float, float, float, float);
};

constexpr Vtable kScalar = {
    &ref::gemm_ab<float>, &ref::gemm_abt<float>, &ref::axpy<float>,
    &ref::scale<float>,   &ref::relu<float>,     &ref::relu_bwd<float>,
    &ref::reduce_sum<float>, &ref::reduce_sumsq<float>, &ref::affine<float>,
    &ref::adamw<float>};

constexpr Vtable kAvx2 = {
    &avx2::gemm_ab, &avx2::gemm_abt, &avx2::axpy,   &avx2::scale,
    &avx2::relu,    &avx2::relu_bwd, &avx2::reduce_sum, &avx2::reduce_sumsq,
    &avx2::affine,  &avx2::adamw};

Backend g_backend = [] {
  Backend b = avx2::supported() ? Backend::avx2 : Backend::scalar;
  if (const char* env = std::getenv("TFD_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) b = Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2::supported()) b = Backend::avx2;
  }
  return b;
}();

const Vtable* g_vt = (g_backend == Backend::avx2) ? &kAvx2 : &kScalar;

}  // namespace

bool avx2_supported() { return avx2::supported(); }

Backend active_backend() { return g_backend; }

void set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2::supported())
    throw Error(Errc::usage, "avx2 kernels requested but CPU lacks avx2/fma");
  g_backend = b;
  g_vt = (b == Backend::avx2) ? &kAvx2 : &kScalar;
}

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void gemm_ab(const float* a, const float* b, float* c, int64_t n, int64_t k,
             int64_t m, bool accumulate) {
  g_vt->gemm_ab(a, b, c, n, k, m, accumulate);
}
void gemm_abt(const float* a, const float* b, float* c, int64_t n, int64_t m,
              int64_t k, bool accumulate) {
  g_vt->gemm_abt(a, b, c, n, m, k, accumulate);
}
void axpy(int64_t n, float alpha, const float* x, float* y) {
  g_vt->axpy(n, alpha, x, y);
}
void scale(int64_t n, float alpha, float* x) { g_vt->scale(n, alpha, x); }
void relu(int64_t n, const float* x, float* y) { g_vt->relu(n, x, y); }
void relu_bwd(int64_t n, const float* y, const float* dy, float* dx) {
  g_vt->relu_bwd(n, y, dy, dx);
}
double reduce_sum(int64_t n, const float* x) { return g_vt->reduce_sum(n, x); }
double reduce_sumsq(int64_t n, const float* x) {
  return g_vt->reduce_sumsq(n, x);
}
void affine(int64_t n, float a, float b, const float* x, float* y) {
  g_vt->affine(n, a, b, x, y);
}
void adamw(int64_t n, float* p, const float* g, float* m, float* v, float lr,
           float b1, float b2, float eps, float wd, float bc1inv,
           float bc2rsqrt) {
  g_vt->adamw(n, p, g, m, v, lr, b1, b2, eps, wd, bc1inv, bc2rsqrt);
}

}  // namespace tfd::kern
