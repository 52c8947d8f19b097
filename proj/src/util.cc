#include "kronalign/util.h"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

namespace kronalign {

namespace {

std::mutex warn_mutex;
WarningSink warn_sink;

}  // namespace

WarningSink SetWarningSink(WarningSink sink) {
  std::lock_guard<std::mutex> lock(warn_mutex);
  std::swap(sink, warn_sink);
  return sink;
}

void Warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(warn_mutex);
  if (warn_sink) {
    warn_sink(message);
  } else {
    std::cerr << "warning: " << message << "\n";
  }
}

int WorkerCount() {
  const char* env = std::getenv("KRONALIGN_THREADS");
  if (env == nullptr) return 1;
  const int value = std::atoi(env);
  if (value <= 0) return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return value;
}

void ParallelFor(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(WorkerCount()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t block = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        const std::size_t end = std::min(count, (w + 1) * block);
        for (std::size_t i = w * block; i < end; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace kronalign
