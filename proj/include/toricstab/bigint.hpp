#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace toricstab {

// Exact arbitrary-precision integer. Ray orbits and fan refinements produce
// generator coordinates that grow geometrically, so fixed-width integers are
// not an option anywhere in the core.
//
// Expression templates are switched off: every arithmetic result is a plain
// value, which keeps `auto` and mixed comparisons predictable.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;

inline BigInt abs(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

inline BigInt gcd(const BigInt& a, const BigInt& b) {
    return boost::multiprecision::gcd(a, b);
}

inline int sign(const BigInt& v) { return v < 0 ? -1 : (v > 0 ? 1 : 0); }

inline double to_double(const BigInt& v) { return v.convert_to<double>(); }

inline std::string to_string(const BigInt& v) { return v.str(); }

// floor(sqrt(n)) for n >= 0.
inline BigInt isqrt(const BigInt& n) {
    if (n < 0) throw std::domain_error("isqrt of negative value");
    return boost::multiprecision::sqrt(n);
}

inline bool is_perfect_square(const BigInt& n, BigInt* root = nullptr) {
    if (n < 0) return false;
    BigInt r = isqrt(n);
    if (r * r != n) return false;
    if (root) *root = r;
    return true;
}

// Cap on coefficient growth, settable via TORICSTAB_MAX_BIGINT_BITS.
// Sector iteration on a non-stabilizable input would otherwise grind on
// ever-larger generators; exceeding the cap aborts the computation cleanly.
inline std::size_t max_bigint_bits() {
    static const std::size_t cached = [] {
        std::size_t bits = 1'000'000;
        if (const char* env = std::getenv("TORICSTAB_MAX_BIGINT_BITS")) {
            char* end = nullptr;
            unsigned long long parsed = std::strtoull(env, &end, 10);
            if (end && *end == '\0' && parsed >= 64) bits = static_cast<std::size_t>(parsed);
        }
        return bits;
    }();
    return cached;
}

inline void guard_magnitude(const BigInt& v) {
    if (v == 0) return;
    const std::size_t bits = boost::multiprecision::msb(abs(v)) + 1;
    if (bits > max_bigint_bits())
        throw std::overflow_error("integer exceeds TORICSTAB_MAX_BIGINT_BITS (" +
                                  std::to_string(max_bigint_bits()) + " bits)");
}

}  // namespace toricstab
