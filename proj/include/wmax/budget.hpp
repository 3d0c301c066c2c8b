#pragma once

#include <chrono>
#include <cstdint>
#include <optional>

namespace wmax {

/// Work limit for search operations. Either bound may be absent; absent means
/// unlimited. Node budgets are deterministic across machines, time budgets are not.
struct Budget {
    std::optional<std::chrono::milliseconds> time;
    std::optional<std::uint64_t> nodes;

    bool unlimited() const { return !time && !nodes; }
};

/// Consumes a Budget. tick() is called once per unit of work; the wall clock is
/// probed only every kClockStride ticks so metering stays cheap. Once exhausted,
/// a meter never recovers.
class BudgetMeter {
public:
    explicit BudgetMeter(const Budget& budget)
        : budget_(budget), start_(std::chrono::steady_clock::now()) {}

    /// Returns false once the budget is exhausted (including on the exhausting tick).
    bool tick(std::uint64_t n = 1) {
        used_ += n;
        if (exhausted_) return false;
        if (budget_.nodes && used_ > *budget_.nodes) exhausted_ = true;
        if (budget_.time && (used_ / kClockStride) != ((used_ - n) / kClockStride) &&
            std::chrono::steady_clock::now() - start_ > *budget_.time)
            exhausted_ = true;
        return !exhausted_;
    }

    bool exhausted() const { return exhausted_; }
    std::uint64_t nodes_used() const { return used_; }

private:
    static constexpr std::uint64_t kClockStride = 1024;

    Budget budget_;
    std::chrono::steady_clock::time_point start_;
    std::uint64_t used_ = 0;
    bool exhausted_ = false;
};

} // namespace wmax
