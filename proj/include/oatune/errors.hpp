#pragma once

#include <stdexcept>
#include <string>

namespace oatune {

// Root of every error thrown by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DesignError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class BoundsError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class StateError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class MechanicsError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    TrainingError(const std::string& what, long step = -1) : Error(what), step_(step) {}

    // Optimizer step (or epoch) at which the failure was detected, -1 if unknown.
    long step() const noexcept { return step_; }

private:
    long step_;
};

}  // namespace oatune
