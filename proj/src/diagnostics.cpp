#include "bhl/diagnostics.hpp"

#include <array>
#include <atomic>

namespace bhl {

namespace {
std::array<std::atomic<std::uint64_t>, static_cast<std::size_t>(Warning::count_)> g_counts{};
}

void note_warning(Warning w) noexcept {
    g_counts[static_cast<std::size_t>(w)].fetch_add(1, std::memory_order_relaxed);
}

std::uint64_t warning_count(Warning w) noexcept {
    return g_counts[static_cast<std::size_t>(w)].load(std::memory_order_relaxed);
}

void reset_warnings() noexcept {
    for (auto& c : g_counts) c.store(0, std::memory_order_relaxed);
}

const char* warning_name(Warning w) noexcept {
    switch (w) {
    case Warning::outside_absorbing_ball: return "outside_absorbing_ball";
    case Warning::tail_clipped: return "tail_clipped";
    default: return "unknown";
    }
}

} // namespace bhl
