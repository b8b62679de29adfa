#include "fracsym/parallel.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>

#include "fracsym/errors.hpp"

namespace fracsym {
namespace {

int workers_from_env() {
  const char* env = std::getenv("FRACSYM_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  int n = 0;
  const char* end = env + std::strlen(env);
  auto res = std::from_chars(env, end, n);
  if (res.ec != std::errc() || res.ptr != end || n < 1) {
    throw DomainError("FRACSYM_THREADS must be a positive integer");
  }
  return n;
}

std::atomic<int>& workers() {
  static std::atomic<int> value{workers_from_env()};
  return value;
}

}  // namespace

int worker_count() { return workers().load(std::memory_order_relaxed); }

void set_worker_count(int n) {
  if (n < 1) throw DomainError("worker count must be >= 1");
  workers().store(n, std::memory_order_relaxed);
}

}  // namespace fracsym
