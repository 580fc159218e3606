#pragma once
#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace forge {

int jobs();
void set_jobs(int n);  // 0 picks the hardware count

// fn(begin, end) on contiguous slices; results must go to disjoint slots
template <class Fn>
void parallel_for(int64_t n, Fn&& fn) {
    const int64_t k = std::min<int64_t>(jobs(), n / 1024 + 1);
    if (k <= 1) {
        fn(int64_t(0), n);
        return;
    }
    std::vector<std::thread> th;
    std::vector<std::exception_ptr> err(k);
    for (int64_t t = 0; t < k; ++t)
        th.emplace_back([&, t] {
            try {
                fn(n * t / k, n * (t + 1) / k);
            } catch (...) {
                err[t] = std::current_exception();
            }
        });
    for (auto& x : th) x.join();
    for (auto& e : err)
        if (e) std::rethrow_exception(e);
}

}  // namespace forge
