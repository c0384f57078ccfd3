#include "ccwb/parallel.hpp"

#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ccwb/errors.hpp"

namespace ccwb {

int worker_count() {
  if (const char* env = std::getenv("CCWB_WORKERS")) {
    try {
      int w = std::stoi(env);
      if (w < 1) throw parameter_error("CCWB_WORKERS must be >= 1");
      return w;
    } catch (const parameter_error&) {
      throw;
    } catch (const std::exception&) {
      throw parameter_error("CCWB_WORKERS is not an integer");
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void run_tasks(int64_t num_tasks, const std::function<void(int64_t)>& task) {
  if (num_tasks <= 0) return;
  int workers = worker_count();
  if (workers == 1 || num_tasks == 1) {
    for (int64_t t = 0; t < num_tasks; ++t) task(t);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (int64_t t = w; t < num_tasks; t += workers) task(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ccwb
