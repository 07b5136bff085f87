#pragma once

#include <stdexcept>
#include <string>

namespace sbic {

// Malformed or inconsistent input (files, trees, parameter points).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The request is well formed but no closed form is available for it.
class UnsupportedRegime : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A brute-force routine was asked to run beyond its configured size cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Monte Carlo estimate is numerically meaningless (e.g. every weight underflows).
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sbic
