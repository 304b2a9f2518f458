#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace invmerton {

/// Failure categories raised by the numerical pipeline. The CLI maps them
/// onto exit codes, so every throw site picks the most specific kind.
enum class ErrorKind {
    InvalidArgument,
    NonFinite,
    MaxDepthExceeded,
    NotBracketed,
    OutOfDomain,
    OutOfRange,
    TailNotNegligible,
    AboveFrontier,
    SingularIntegrand,
    InconsistentPair,
    NotTimeHomogeneous,
    Saturated,
    Config,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace invmerton
