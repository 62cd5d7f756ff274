#include "hyperlab/parallel.hpp"

#include <cstdlib>
#include <limits>
#include <string>

namespace hyperlab {

unsigned thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const char* env = std::getenv("HYPERLAB_THREADS");
    if (env == nullptr) return hw;
    try {
        const long v = std::stol(env);
        if (v >= 1) return std::min<unsigned long>(static_cast<unsigned long>(v), hw);
    } catch (const std::exception&) {
    }
    return hw;
}

double parallel_max(std::size_t count, const std::function<double(std::size_t)>& eval) {
    double best = std::numeric_limits<double>::lowest();
    if (count == 0) return best;

    // Threads only pay off on larger regions; small ones stay sequential.
    const std::size_t min_chunk = 256;
    const std::size_t workers =
        std::min<std::size_t>(thread_budget(), (count + min_chunk - 1) / min_chunk);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) best = std::max(best, eval(i));
        return best;
    }

    std::vector<double> partial(workers, std::numeric_limits<double>::lowest());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            const std::size_t lo = count * w / workers;
            const std::size_t hi = count * (w + 1) / workers;
            double local = std::numeric_limits<double>::lowest();
            for (std::size_t i = lo; i < hi; ++i) local = std::max(local, eval(i));
            partial[w] = local;
        });
    }
    for (auto& t : pool) t.join();
    for (const double v : partial) best = std::max(best, v);
    return best;
}

}  // namespace hyperlab
