#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dmt {

using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i8 = std::int8_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// Thrown on invalid arguments or violated preconditions (CLI exit code 2).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a computation would exceed the documented desk-scale guards
// (ring size p^(hn) <= 2^32, enumerated group size <= 2^24).  CLI exit code 2.
struct SizeGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal invariant failure; indicates a bug, not bad input (CLI exit code 1).
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw UsageError(msg);
}

inline void check_internal(bool cond, const std::string& msg) {
    if (!cond) throw InternalError(msg);
}

inline bool is_prime(u64 m) {
    if (m < 2) return false;
    for (u64 d = 2; d * d <= m; ++d)
        if (m % d == 0) return false;
    return true;
}

// p^e, throwing if the result would not fit the given bound.
inline u64 checked_pow(u64 p, u64 e, u64 bound, const char* what) {
    u64 r = 1;
    for (u64 i = 0; i < e; ++i) {
        if (r > bound / p) throw SizeGuardError(std::string(what) + ": size guard exceeded");
        r *= p;
    }
    return r;
}

inline u64 gcd_u64(u64 a, u64 b) {
    while (b) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Decimal rendering of u128 (orders can exceed 2^64).
inline std::string to_string_u128(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(char('0' + int(v % 10)));
        v /= 10;
    }
    return {s.rbegin(), s.rend()};
}

}  // namespace dmt
