#pragma once

#include <stdexcept>
#include <string>

namespace causal {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class CycleError : public Error {
public:
    using Error::Error;
};

class SingletonConfounding : public Error {
public:
    using Error::Error;
};

class SpernerViolation : public Error {
public:
    using Error::Error;
};

class UnknownVariable : public Error {
public:
    using Error::Error;
};

class OverlappingSets : public Error {
public:
    using Error::Error;
};

class SearchSpaceTooLarge : public Error {
public:
    using Error::Error;
};

class UnboundVariable : public Error {
public:
    using Error::Error;
};

class DuplicateBinding : public Error {
public:
    using Error::Error;
};

class OutOfDomainValue : public Error {
public:
    using Error::Error;
};

class ZeroProbabilityCondition : public Error {
public:
    using Error::Error;
};

class NotComputable : public Error {
public:
    using Error::Error;
};

class DivisionByZero : public Error {
public:
    using Error::Error;
};

class ScopeMismatch : public Error {
public:
    using Error::Error;
};

class PreconditionViolated : public Error {
public:
    using Error::Error;
};

class LatentParent : public Error {
public:
    using Error::Error;
};

class NotIdentifiable : public Error {
public:
    using Error::Error;
};

class NotComputableFromInfo : public Error {
public:
    using Error::Error;
};

class Infeasible : public Error {
public:
    using Error::Error;
};

class EmptyModelSet : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace causal
