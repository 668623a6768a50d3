#pragma once

#include <stdexcept>
#include <string>

namespace plf {

// Base class for all library errors. Specific kinds below mirror the
// failure modes of each module; callers that need to branch catch the
// concrete type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DomainError : public Error {
public:
    using Error::Error;
};

class NotSimpleRoot : public Error {
public:
    using Error::Error;
};

// A computation could not certify its result at the working precision.
class PrecisionInsufficient : public Error {
public:
    using Error::Error;
};

class UncertifiedTail : public Error {
public:
    using Error::Error;
};

class ZeroSeries : public Error {
public:
    using Error::Error;
};

class BadParameters : public Error {
public:
    using Error::Error;
};

class ZeroElement : public Error {
public:
    using Error::Error;
};

class NoSolutionFound : public Error {
public:
    using Error::Error;
};

class InconsistentSystem : public Error {
public:
    using Error::Error;
};

class InfeasibleParameters : public Error {
public:
    using Error::Error;
};

class AdditionFormulaUndefined : public Error {
public:
    using Error::Error;
};

class ZeroValue : public Error {
public:
    using Error::Error;
};

class InputError : public Error {
public:
    using Error::Error;
};

}  // namespace plf
