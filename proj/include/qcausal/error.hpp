#pragma once

#include <stdexcept>
#include <string>

namespace qcausal {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: bad dimensions, non-unit axes, invalid operators,
// unknown scenario keys and the like.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A fixed desk-scale cap (clique count, open-set count, free pairs) was hit.
class ResourceError : public Error {
public:
    using Error::Error;
};

// Collapse onto a branch whose Born probability is (numerically) zero.
class ImpossibleOutcome : public Error {
public:
    using Error::Error;
};

}  // namespace qcausal
