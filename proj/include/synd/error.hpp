#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace synd {

/// Stable machine-readable failure kinds. The CLI prints the name verbatim.
enum class ErrorCode {
    EmptyLanguage,
    FiniteLanguage,
    AlphabetMismatch,
    NotComplete,
    NotTrim,
    NotInLanguage,
    SymbolClash,
    InvalidMap,
    NotProlongable,
    NotGrowing,
    Stalled,
    SeedMortal,
    Erasing,
    BlockNotInFixedPoint,
    UnresolvedComparison,
    RateUnresolved,
    CaseMismatch,
    StreamsDiffer,
    StreamExhausted,
    InvalidArgument,
    Parse,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::EmptyLanguage: return "EmptyLanguage";
    case ErrorCode::FiniteLanguage: return "FiniteLanguage";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::NotComplete: return "NotComplete";
    case ErrorCode::NotTrim: return "NotTrim";
    case ErrorCode::NotInLanguage: return "NotInLanguage";
    case ErrorCode::SymbolClash: return "SymbolClash";
    case ErrorCode::InvalidMap: return "InvalidMap";
    case ErrorCode::NotProlongable: return "NotProlongable";
    case ErrorCode::NotGrowing: return "NotGrowing";
    case ErrorCode::Stalled: return "Stalled";
    case ErrorCode::SeedMortal: return "SeedMortal";
    case ErrorCode::Erasing: return "Erasing";
    case ErrorCode::BlockNotInFixedPoint: return "BlockNotInFixedPoint";
    case ErrorCode::UnresolvedComparison: return "UnresolvedComparison";
    case ErrorCode::RateUnresolved: return "RateUnresolved";
    case ErrorCode::CaseMismatch: return "CaseMismatch";
    case ErrorCode::StreamsDiffer: return "StreamsDiffer";
    case ErrorCode::StreamExhausted: return "StreamExhausted";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Malformed input file. `line` is 1-based, 0 when not attributable to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(ErrorCode::Parse, line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace synd
