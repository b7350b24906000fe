#pragma once

#include "moment_bounds/error.hpp"

#include <cstdint>

namespace moment_bounds::detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b, const char* module) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw DomainError(module, "64-bit overflow in count accumulation");
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* module) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw DomainError(module, "64-bit overflow in count accumulation");
    return r;
}

} // namespace moment_bounds::detail
