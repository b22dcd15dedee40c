#pragma once

#include <stdexcept>
#include <string>

namespace affiter {

/// A numerical method could not deliver its result: factorization did not
/// converge, a matrix is outside the regime a method needs, or a rigorous
/// enclosure could not be certified. Shape and argument errors use
/// std::invalid_argument instead.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace affiter
