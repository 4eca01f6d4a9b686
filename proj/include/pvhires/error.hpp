#pragma once

#include <stdexcept>
#include <string>

namespace pvhires {

/// Broad failure class. The CLI maps these onto distinct exit codes.
enum class ErrorKind { Config, Data, Numerical };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

struct DataError : Error {
    explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

struct NumericalError : Error {
    explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

struct UnknownModule : DataError {
    explicit UnknownModule(const std::string& id) : DataError("unknown module: " + id), id(id) {}
    std::string id;
};

struct DimensionMismatch : DataError {
    using DataError::DataError;
};

struct TopologyMismatch : DataError {
    using DataError::DataError;
};

struct NonUniformTimestep : DataError {
    using DataError::DataError;
};

struct LengthMismatch : DataError {
    using DataError::DataError;
};

struct DegenerateVariance : DataError {
    using DataError::DataError;
};

struct EmptyInput : DataError {
    using DataError::DataError;
};

struct NoDomainOverlap : NumericalError {
    using NumericalError::NumericalError;
};

struct NonConvergence : NumericalError {
    using NumericalError::NumericalError;
};

struct NoRootInBracket : NumericalError {
    using NumericalError::NumericalError;
};

struct CalibrationDiverged : NumericalError {
    using NumericalError::NumericalError;
};

struct NegativeRsh : CalibrationDiverged {
    NegativeRsh(const std::string& what, double rs) : CalibrationDiverged(what), rs(rs) {}
    double rs;
};

struct InconsistentInputs : DataError {
    using DataError::DataError;
};

/// Wraps a failure with the pipeline stage that raised it, keeping the kind.
class StageError : public Error {
public:
    StageError(std::string stage, const Error& cause)
        : Error(cause.kind(), stage + ": " + cause.what()), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace pvhires
