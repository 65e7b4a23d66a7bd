#pragma once

#include <stdexcept>
#include <string>

namespace emosent {

/// Bad or missing input data. The CLI maps this to exit status 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical precondition does not hold (singular design, empty sample, ...).
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace emosent
