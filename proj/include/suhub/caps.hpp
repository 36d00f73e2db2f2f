#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace suhub {

/// Thrown when a requested basis or search graph would exceed the size cap.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact-enumeration size cap. Default 10^6; HUBBARD_LOOPS_CAP overrides.
inline long dimension_cap() {
    if (const char* env = std::getenv("HUBBARD_LOOPS_CAP")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return v;
    }
    return 1'000'000L;
}

inline void check_cap(long dimension, const std::string& what) {
    const long cap = dimension_cap();
    if (dimension > cap)
        throw CapExceeded(what + ": dimension " + std::to_string(dimension) +
                          " exceeds cap " + std::to_string(cap) +
                          " (set HUBBARD_LOOPS_CAP to raise)");
}

}  // namespace suhub
