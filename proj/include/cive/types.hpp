// Basic identifiers and the error taxonomy shared by all modules.
#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace cive {

using VarId = std::int32_t;
inline constexpr VarId kNoVar = -1;

// Factor sizes can overflow 64 bits on large symbolic runs; saturate.
inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    if (a == 0 || b == 0) return 0;
    if (a > kMax / b) return kMax;
    return a * b;
}

enum class VarKind { regular, convergent, deputy };

// Thrown for malformed API/CLI usage (bad variable names, out-of-range
// values, illegitimate orderings).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown while reading a network file.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by graph operations on structurally broken networks (cycles).
struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Normalizing an all-zero answer: P(Y=Y0) = 0.
struct ImpossibleEvidenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// State space exceeds a configured cell bound (brute-force enumeration).
struct ResourceBoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cive
