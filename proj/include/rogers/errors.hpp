#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace rogers {

// Every failure carries a machine-readable code and, when it applies, the
// offending input field; the CLI serializes both.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg, std::string field = {})
        : std::runtime_error(msg), code_(std::move(code)), field_(std::move(field)) {}
    const std::string& code() const noexcept { return code_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::string code_;
    std::string field_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg, std::string field = {})
        : Error("domain_error", msg, std::move(field)) {}
};

struct ArgumentError : Error {
    explicit ArgumentError(const std::string& msg, std::string field = {})
        : Error("argument_error", msg, std::move(field)) {}
};

struct ValidationError : Error {
    ValidationError(const std::string& msg, std::string field)
        : Error("validation_error", msg, std::move(field)) {}
};

struct RogersViolation : Error {
    RogersViolation(const std::string& msg, std::complex<double> witness)
        : Error("rogers_violation", msg, "spec"), witness(witness) {}
    std::complex<double> witness;
};

struct ConvergenceError : Error {
    ConvergenceError(const std::string& msg, std::complex<double> partial, double err)
        : Error("convergence_error", msg), partial_value(partial), err_estimate(err) {}
    std::complex<double> partial_value;
    double err_estimate;
};

struct MethodUnsupported : Error {
    explicit MethodUnsupported(const std::string& msg) : Error("method_unsupported", msg) {}
};

struct SpineUndefined : Error {
    explicit SpineUndefined(const std::string& msg) : Error("spine_undefined", msg) {}
};

struct EstimationError : Error {
    explicit EstimationError(const std::string& msg) : Error("estimation_error", msg) {}
};

struct InversionInstability : Error {
    explicit InversionInstability(const std::string& msg) : Error("inversion_instability", msg) {}
};

struct ConventionViolation : Error {
    explicit ConventionViolation(const std::string& msg, std::string field = {})
        : Error("convention_violation", msg, std::move(field)) {}
};

}  // namespace rogers
