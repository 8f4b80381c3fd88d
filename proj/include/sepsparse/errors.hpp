#pragma once

#include <stdexcept>
#include <string>

namespace sepsparse {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// No Delta-separated support of the requested sparsity exists.
class InfeasibleError : public Error {
  public:
    using Error::Error;
};

class InvalidInputError : public Error {
  public:
    using Error::Error;
};

class InvalidParamsError : public Error {
  public:
    using Error::Error;
};

/// Raised by the brute-force oracle when the dimension exceeds its cap.
class InstanceTooLargeError : public Error {
  public:
    using Error::Error;
};

/// The Las Vegas loop hit its safety cap. Under the algorithm's analysis a
/// false trip has probability < 2^-64, so this signals an implementation bug.
class IterationLimitError : public Error {
  public:
    using Error::Error;
};

}  // namespace sepsparse
