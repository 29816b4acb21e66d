#include "muskat/parallel.hpp"

#include <algorithm>

namespace muskat {

namespace {
std::atomic<unsigned> g_workers{1};
}

void set_worker_count(unsigned n) { g_workers.store(std::max(1u, n)); }
unsigned worker_count() { return g_workers.load(); }

}  // namespace muskat
