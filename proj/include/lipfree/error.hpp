#pragma once

#include <stdexcept>
#include <string>

namespace lipfree {

// A precondition on an argument or input file was violated.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// A well-formed problem has no feasible solution (unbalanced source,
// disconnected grid).
class InfeasibleProblem : public std::runtime_error {
 public:
  explicit InfeasibleProblem(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lipfree
