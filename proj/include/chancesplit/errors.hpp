#pragma once

#include <stdexcept>
#include <string>

namespace chancesplit {

/// Malformed instance: dimension mismatch, lottery not summing to one, bad permutation.
class InstanceError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operation called outside its stated precondition (e.g. welfare formula on a
/// matching that is not same-sided, phase-2 fill with unbalanced slack).
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Mechanism defined only for a restricted instance size (Except, ME, MEU need n = 3).
class UnsupportedInstance : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Text input could not be decoded into a profile or matching.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace chancesplit
