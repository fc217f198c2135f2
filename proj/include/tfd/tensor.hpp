#pragma once
// Minimal dense row-major tensor. Just enough for the clip models: contiguous
// aligned storage, shape bookkeeping, no views or broadcasting.

#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <new>
#include <numeric>
#include <vector>

#include "tfd/errors.hpp"

namespace tfd {

template <typename T>
struct AlignedAlloc {
  using value_type = T;
  static constexpr std::size_t alignment = 64;
  AlignedAlloc() = default;
  template <typename U>
  AlignedAlloc(const AlignedAlloc<U>&) {}
  T* allocate(std::size_t n) {
    void* p = ::operator new(n * sizeof(T), std::align_val_t(alignment));
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) {
    ::operator delete(p, std::align_val_t(alignment));
  }
  bool operator==(const AlignedAlloc&) const { return true; }
};

template <typename T>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int64_t> shape) { resize(std::move(shape)); }
  Tensor(std::initializer_list<int64_t> shape)
      : Tensor(std::vector<int64_t>(shape)) {}

  void resize(std::vector<int64_t> shape) {
    shape_ = std::move(shape);
    int64_t n = 1;
    for (int64_t d : shape_) {
      if (d < 0) throw Error(Errc::input, "negative tensor dimension");
      n *= d;
    }
    data_.assign(static_cast<std::size_t>(n), T(0));
  }

  const std::vector<int64_t>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int64_t dim(int i) const { return shape_[static_cast<std::size_t>(i)]; }
  int64_t numel() const { return static_cast<int64_t>(data_.size()); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  T& operator[](int64_t i) { return data_[static_cast<std::size_t>(i)]; }
  const T& operator[](int64_t i) const {
    return data_[static_cast<std::size_t>(i)];
  }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }
  void zero() { fill(T(0)); }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

 private:
  std::vector<int64_t> shape_;
  std::vector<T, AlignedAlloc<T>> data_;
};

}  // namespace tfd
