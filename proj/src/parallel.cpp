#include "tfd/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace tfd {

namespace {

thread_local bool t_inside_pool = false;

class Pool {
 public:
  explicit Pool(int workers) : task_gen_(0), done_count_(0) {
    for (int i = 0; i < workers; ++i) {
      threads_.emplace_back([this] { worker_loop(); });
    }
  }

  ~Pool() {
    {
      std::unique_lock<std::mutex> lk(mu_);
      stop_ = true;
      ++task_gen_;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

  // Runs fn(chunk_index) for chunk_index in [0, nchunks); caller takes chunk 0.
  void run(int nchunks, const std::function<void(int)>& fn) {
    {
      std::unique_lock<std::mutex> lk(mu_);
      fn_ = &fn;
      nchunks_ = nchunks;
      next_chunk_ = 1;
      done_count_ = 1;  // chunk 0 accounted for by the caller
      ++task_gen_;
    }
    cv_.notify_all();
    fn(0);
    int c;
    while ((c = claim()) >= 0) fn(c);
    std::unique_lock<std::mutex> lk(mu_);
    done_cv_.wait(lk, [&] { return done_count_ >= nchunks_; });
    fn_ = nullptr;
  }

 private:
  int claim() {
    int c = next_chunk_.fetch_add(1);
    return c < nchunks_ ? c : -1;
  }

  void worker_loop() {
    t_inside_pool = true;
    uint64_t seen_gen = 0;
    for (;;) {
      const std::function<void(int)>* fn = nullptr;
      {
        std::unique_lock<std::mutex> lk(mu_);
        cv_.wait(lk, [&] { return stop_ || task_gen_ != seen_gen; });
        if (stop_) return;
        seen_gen = task_gen_;
        fn = fn_;
      }
      if (!fn) continue;
      int done = 0;
      int c;
      while ((c = claim()) >= 0) {
        (*fn)(c);
        ++done;
      }
      if (done >= 0) {
        std::unique_lock<std::mutex> lk(mu_);
        done_count_ += done;
        if (done_count_ >= nchunks_) done_cv_.notify_all();
      }
    }
  }

  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable done_cv_;
  const std::function<void(int)>* fn_ = nullptr;
  uint64_t task_gen_;
  int nchunks_ = 0;
  std::atomic<int> next_chunk_{0};
  int done_count_;
  bool stop_ = false;
};

Pool& pool() {
  static Pool p(thread_count() - 1);
  return p;
}

}  // namespace

int thread_count() {
  static int n = [] {
    if (const char* env = std::getenv("TFD_THREADS")) {
      int v = std::atoi(env);
      if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
  }();
  return n;
}

void parallel_for(int64_t n, const std::function<void(int64_t, int64_t)>& fn) {
  if (n <= 0) return;
  const int nt = thread_count();
  if (nt == 1 || n == 1 || t_inside_pool) {
    fn(0, n);
    return;
  }
  const int chunks = static_cast<int>(n < nt ? n : nt);
  pool().run(chunks, [&](int c) {
    int64_t b = n * c / chunks;
    int64_t e = n * (c + 1) / chunks;
    if (b < e) fn(b, e);
  });
}

}  // namespace tfd
