#pragma once

#include <stdexcept>
#include <string>

namespace symmod {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text; the message carries a line:column position.
class SyntaxError : public Error {
 public:
  using Error::Error;
};

// Ill-sorted term or formula; the message names the offending symbol.
class SortError : public Error {
 public:
  using Error::Error;
};

// A construct the selected decision procedure cannot handle.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// A configured enumeration or case-split budget was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace symmod
