#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace gamow {

inline constexpr double pi = 3.14159265358979323846;

// |B_1| in R^N
inline double ball_volume(int N) { return N == 2 ? pi : 4.0 * pi / 3.0; }

// |S^{N-1}| = N * omega_N
inline double sphere_area(int N) { return N * ball_volume(N); }

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : Error { using Error::Error; };
struct DivergentIntegral : Error { using Error::Error; };
struct UnsupportedDimension : Error { using Error::Error; };
struct NonFiniteSample : Error { using Error::Error; };
struct AmplitudeOverflow : Error { using Error::Error; };
struct PreconditionViolation : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct ShapeParseError : Error { using Error::Error; };

} // namespace gamow
