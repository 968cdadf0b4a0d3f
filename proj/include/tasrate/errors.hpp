#pragma once

#include <stdexcept>
#include <string>

namespace tasrate {

// Iterative routine failed to converge; carries the best estimate so far.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double best_estimate)
        : std::runtime_error(what), best_estimate_(best_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }

  private:
    double best_estimate_;
};

// Root search exhausted its box; the message includes a residual trace.
class SearchFailureError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace tasrate
