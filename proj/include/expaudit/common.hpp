#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ea {

using cplx = std::complex<double>;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using i128 = __int128;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr const char* kVersion = "1.0.0";

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonInvertibleError : Error {
    using Error::Error;
};
struct NotCoprimeError : Error {
    using Error::Error;
};
struct DegenerateCharacterError : Error {
    using Error::Error;
};
struct PreconditionError : Error {
    using Error::Error;
};
struct DegenerateBranchError : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct QuadratureError : Error {
    using Error::Error;
};
struct TruncationError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct GapError : ParseError {
    using ParseError::ParseError;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace ea
