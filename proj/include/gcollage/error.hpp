#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gcollage {

/// A precondition on user-supplied parameters was violated.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A rule or report could not be built from otherwise valid parameters
/// (node caps, table bounds, numeric overflow).
class ConstructionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Evaluating an integrand failed at a specific node.
class EvaluationError : public std::runtime_error {
public:
  EvaluationError(std::size_t node, const std::string &what)
      : std::runtime_error("evaluation failed at node " + std::to_string(node) + ": " + what),
        node_(node) {}

  std::size_t node() const noexcept { return node_; }

private:
  std::size_t node_;
};

} // namespace gcollage
