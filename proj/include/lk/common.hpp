#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace lk {

using Complex = std::complex<double>;

// Thrown when two independent computation routes that must agree (by theorem)
// disagree beyond tolerance. This is never swallowed: it indicates a bug in
// one of the routes, not bad user input.
struct ConsistencyError : std::runtime_error {
    explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

} // namespace lk
