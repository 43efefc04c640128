#pragma once

#include <stdexcept>
#include <string>

namespace fdf {

/// Mismatched vector/matrix/grid sizes.
class dimension_error : public std::invalid_argument {
public:
    explicit dimension_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Too few observations for the requested operation.
class insufficient_data : public std::invalid_argument {
public:
    explicit insufficient_data(const std::string& what) : std::invalid_argument(what) {}
};

/// Out-of-range or otherwise invalid parameter (lag, bandwidth, model id, ...).
class parameter_error : public std::invalid_argument {
public:
    explicit parameter_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical failure during estimation: degenerate covariance, ill-conditioned
/// inverse, rank-deficient design, non-finite values.
class estimation_error : public std::runtime_error {
public:
    explicit estimation_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fdf
