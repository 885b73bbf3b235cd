#pragma once

#include <stdexcept>
#include <string>

namespace catqed {

// Bad user input: malformed config, out-of-range parameters, schema
// violations.  CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical contract was violated at run time: under-resolved grid,
// truncation leak, step-size rule.  CLI maps this to exit code 3.
class NumericsError : public std::runtime_error {
 public:
  explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace catqed
