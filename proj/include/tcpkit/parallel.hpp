#pragma once

#include <chrono>
#include <functional>
#include <future>
#include <optional>
#include <vector>

namespace tcpkit {

using Deadline = std::chrono::steady_clock::time_point;

inline Deadline deadline_after_ms(long ms) {
    return std::chrono::steady_clock::now() + std::chrono::milliseconds(ms);
}

inline bool expired(const Deadline& d) {
    return std::chrono::steady_clock::now() >= d;
}

/// Evaluates fn(0), fn(1), ... and returns the result of the lowest index
/// that succeeds. Indices run in blocks of `threads`, so the winner is the
/// same for every thread count. The deadline is checked between blocks.
template <typename R>
std::optional<R> first_success(long count, int threads, const Deadline& deadline,
                               const std::function<std::optional<R>(long)>& fn) {
    if (threads <= 1) {
        for (long k = 0; k < count; ++k) {
            if (k > 0 && expired(deadline)) break;
            if (auto r = fn(k)) return r;
        }
        return std::nullopt;
    }
    for (long base = 0; base < count; base += threads) {
        if (base > 0 && expired(deadline)) break;
        const long end = std::min(count, base + threads);
        std::vector<std::future<std::optional<R>>> futs;
        futs.reserve(static_cast<std::size_t>(end - base));
        for (long k = base; k < end; ++k)
            futs.push_back(std::async(std::launch::async, fn, k));
        std::optional<R> winner;
        for (auto& f : futs) {
            auto r = f.get();
            if (r && !winner) winner = std::move(r);
        }
        if (winner) return winner;
    }
    return std::nullopt;
}

}  // namespace tcpkit
