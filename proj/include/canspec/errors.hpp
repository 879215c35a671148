#pragma once

#include <stdexcept>
#include <string>

namespace canspec {

// A mathematical precondition was violated (bad N, non-coprime scaling, ...).
// The CLI maps this to exit status 1.
class domain_error : public std::runtime_error {
 public:
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed configuration: unknown keys, missing required parameters,
// unparsable values.  The CLI maps this to exit status 2.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A computation exceeded its configured budget (state counts, word counts,
// integer ranges).  The CLI maps this to exit status 2.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace canspec
