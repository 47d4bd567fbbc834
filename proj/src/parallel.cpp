#include "fatou/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fatou {

int thread_count() {
    if (const char* env = std::getenv("FATOU_LAB_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (...) {
        }
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    std::exception_ptr first;
    std::mutex m;
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
    for (long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(m);
            if (!first) first = std::current_exception();
        }
    }
    if (first) std::rethrow_exception(first);
}

} // namespace fatou
