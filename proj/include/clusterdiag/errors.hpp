#pragma once

#include <stdexcept>
#include <string>

namespace clusterdiag {

enum class ErrorCode {
    NonFiniteScore,
    LabelOutOfDomain,
    LengthMismatch,
    EmptyInput,
    ProbabilityOutOfRange,
    InvalidEpsilon,
    MissingProbabilities,
    NoPositives,
    NoNegatives,
    NoDefinedValue,
    TooFewBins,
    EdgeMismatch,
    UnknownCluster,
    NoFeatures,
    EmptyComplement,
    TooFewSamples,
    NonFiniteFeature,
    DegenerateFeatures,
    DimensionMismatch,
    FileNotFound,
    ParseError,
    EmptyAfterFiltering,
    IoError,
    InternalCheckFailed,
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonFiniteScore: return "NonFiniteScore";
        case ErrorCode::LabelOutOfDomain: return "LabelOutOfDomain";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
        case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
        case ErrorCode::MissingProbabilities: return "MissingProbabilities";
        case ErrorCode::NoPositives: return "NoPositives";
        case ErrorCode::NoNegatives: return "NoNegatives";
        case ErrorCode::NoDefinedValue: return "NoDefinedValue";
        case ErrorCode::TooFewBins: return "TooFewBins";
        case ErrorCode::EdgeMismatch: return "EdgeMismatch";
        case ErrorCode::UnknownCluster: return "UnknownCluster";
        case ErrorCode::NoFeatures: return "NoFeatures";
        case ErrorCode::EmptyComplement: return "EmptyComplement";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
        case ErrorCode::DegenerateFeatures: return "DegenerateFeatures";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::EmptyAfterFiltering: return "EmptyAfterFiltering";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::InternalCheckFailed: return "InternalCheckFailed";
    }
    return "Error";
}

/// Single exception type for the whole library; the code is machine-checkable,
/// the message carries row/column context where available.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace clusterdiag
