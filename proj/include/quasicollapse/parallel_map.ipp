#include <atomic>
#include <exception>
#include <thread>

namespace quasicollapse {

template <typename Result>
std::vector<Result> parallel_map(int count, int threads, const std::function<Result(int)>& task)
{
  std::vector<std::optional<Result>> slots(count > 0 ? count : 0);
  std::vector<std::exception_ptr> errors(slots.size());
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(task(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<Result> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace quasicollapse
