#include "kforge/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace kforge {

int worker_count() {
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("KFORGE_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap > 0 && cap < n) n = cap;
        } catch (...) {
            // unparsable value: ignore, keep the OpenMP default
        }
    }
    return n;
}

} // namespace kforge
