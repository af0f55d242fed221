#pragma once

#include <stdexcept>
#include <string>

namespace bvn {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct AddressError : Error { using Error::Error; };
struct CaretError : Error { using Error::Error; };
struct ArityError : Error { using Error::Error; };
struct StrandError : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct NotACableError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct MoveError : Error { using Error::Error; };
struct NotAnElementError : Error { using Error::Error; };
struct DepthError : Error { using Error::Error; };
struct SubgroupError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

// Raised when an internal invariant breaks; maps to CLI exit code 3.
struct InternalError : Error { using Error::Error; };

}  // namespace bvn
