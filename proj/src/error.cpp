#include "invmerton/error.hpp"

namespace invmerton {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::MaxDepthExceeded: return "MaxDepthExceeded";
        case ErrorKind::NotBracketed: return "NotBracketed";
        case ErrorKind::OutOfDomain: return "OutOfDomain";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::TailNotNegligible: return "TailNotNegligible";
        case ErrorKind::AboveFrontier: return "AboveFrontier";
        case ErrorKind::SingularIntegrand: return "SingularIntegrand";
        case ErrorKind::InconsistentPair: return "InconsistentPair";
        case ErrorKind::NotTimeHomogeneous: return "NotTimeHomogeneous";
        case ErrorKind::Saturated: return "Saturated";
        case ErrorKind::Config: return "Config";
    }
    return "Unknown";
}

}  // namespace invmerton
