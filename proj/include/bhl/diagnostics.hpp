#pragma once

#include <cstdint>

namespace bhl {

/// Soft conditions the library reports but does not treat as errors.
enum class Warning : int {
    outside_absorbing_ball, ///< a step started outside B_{r*}
    tail_clipped,           ///< more than 1e-14 squared mass clipped at the window edge
    count_
};

/// Squared mass above which clipping counts as a warning.
inline constexpr double kClipWarnThreshold = 1e-14;

/// Thread-safe counters; the CLI prints them after a run.
void note_warning(Warning w) noexcept;
std::uint64_t warning_count(Warning w) noexcept;
void reset_warnings() noexcept;
const char* warning_name(Warning w) noexcept;

} // namespace bhl
