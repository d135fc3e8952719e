#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qsat {

/// Malformed formula text. `position` is the 0-based character offset.
class ParseError : public std::invalid_argument {
   public:
    ParseError(const std::string &message, std::size_t position)
        : std::invalid_argument(message + " at position " + std::to_string(position)), position_(position) {
    }
    std::size_t position() const noexcept {
        return position_;
    }

   private:
    std::size_t position_;
};

/// A value (constant, width, parameter) outside its permitted range.
class RangeError : public std::out_of_range {
   public:
    using std::out_of_range::out_of_range;
};

/// A request that would exceed a memory/time guard (statevector width, enumeration size).
class ResourceError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A structural invariant of a circuit or state was violated.
class InvariantError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

}  // namespace qsat
