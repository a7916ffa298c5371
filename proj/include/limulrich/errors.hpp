#pragma once

#include <stdexcept>
#include <string>

namespace limulrich {

// Error taxonomy mirrored by the CLI exit codes:
//   input_error -> 1, window_error (and normalization_error) -> 2,
//   math_assert_error -> 3.

struct input_error : std::runtime_error {
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed dimensions handed to the linear algebra kernel.
struct shape_error : input_error {
  explicit shape_error(const std::string& msg) : input_error(msg) {}
};

// Out-of-range cohomological or slice index.
struct index_error : input_error {
  explicit index_error(const std::string& msg) : input_error(msg) {}
};

// A windowed computation could not certify convergence (or an index fell
// outside the realized window). Enlarging the window is the usual fix.
struct window_error : std::runtime_error {
  explicit window_error(const std::string& msg) : std::runtime_error(msg) {}
};

// No system of parameters of linear forms was found within the retry budget.
struct normalization_error : window_error {
  explicit normalization_error(const std::string& msg) : window_error(msg) {}
};

// An exact identity backed by a proof failed; this always indicates a bug.
struct math_assert_error : std::runtime_error {
  explicit math_assert_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace limulrich
