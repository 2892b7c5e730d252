#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace routelab {

enum class ErrorCode {
    MalformedLine,
    NonPositiveWeight,
    DisconnectedGraph,
    SelfLoop,
    DuplicateEdge,
    InvalidParameters,
    CouldNotConnect,
    InvalidNode,
    EmptySourceSet,
    GraphTooLarge,
    CountOutOfRange,
    ForwardingStuck,
    LabelMismatch,
    InvalidDepth,
    OracleUnavailable,
    ParseError,
    ConfigInvalid,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::CouldNotConnect: return "CouldNotConnect";
    case ErrorCode::InvalidNode: return "InvalidNode";
    case ErrorCode::EmptySourceSet: return "EmptySourceSet";
    case ErrorCode::GraphTooLarge: return "GraphTooLarge";
    case ErrorCode::CountOutOfRange: return "CountOutOfRange";
    case ErrorCode::ForwardingStuck: return "ForwardingStuck";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::InvalidDepth: return "InvalidDepth";
    case ErrorCode::OracleUnavailable: return "OracleUnavailable";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Configuration errors additionally name the offending field, e.g. "topology.n".
class ConfigError : public Error {
public:
    ConfigError(ErrorCode code, std::string field, const std::string& what)
        : Error(code, field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace routelab
