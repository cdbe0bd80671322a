#pragma once

#include <stdexcept>
#include <string>

namespace dnl {

/// Point or probe outside the region where an object is defined.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exponents outside the range an estimate requires.
class RegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two sources of truth that should agree do not.
class InconsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A filtration law that does not reduce to a single power of the gradient.
class NotPowerLaw : public std::runtime_error {
public:
    NotPowerLaw(const std::string& law, const std::string& diagnosis)
        : std::runtime_error("not a power law: " + law + " (" + diagnosis + ")"), law_(law), diagnosis_(diagnosis) {}
    const std::string& law() const { return law_; }
    const std::string& diagnosis() const { return diagnosis_; }

private:
    std::string law_;
    std::string diagnosis_;
};

/// Malformed configuration text or option, with its location when known.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0, int column = 0)
        : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + what : what),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

class StepFailure : public std::runtime_error {
public:
    StepFailure(const std::string& what, double time, double residual)
        : std::runtime_error(what), time_(time), residual_(residual) {}
    double time() const { return time_; }
    double residual() const { return residual_; }

private:
    double time_;
    double residual_;
};

}  // namespace dnl
