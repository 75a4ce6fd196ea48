#pragma once

#include <stdexcept>
#include <string>

namespace effsum {

// Base of every error the library raises. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CarrierMismatch : public Error {
public:
    using Error::Error;
};

class EmptyOperand : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class NotApplicable : public Error {
public:
    using Error::Error;
};

class ChainOverflow : public Error {
public:
    using Error::Error;
};

class MalformedSystem : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class ArithmeticOverflow : public Error {
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

class InvalidSizes : public Error {
public:
    using Error::Error;
};

} // namespace effsum
