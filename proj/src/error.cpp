#include "betarep/error.hpp"

namespace betarep {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Parse: return "Parse";
        case ErrorKind::NotMonic: return "NotMonic";
        case ErrorKind::Reducible: return "Reducible";
        case ErrorKind::IrreducibilityUndetermined: return "IrreducibilityUndetermined";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::FieldMismatch: return "FieldMismatch";
        case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorKind::NotExpandingPlace: return "NotExpandingPlace";
        case ErrorKind::DenominatorCapExceeded: return "DenominatorCapExceeded";
        case ErrorKind::NoAdmissibleDigit: return "NoAdmissibleDigit";
        case ErrorKind::IterationCapExceeded: return "IterationCapExceeded";
        case ErrorKind::MemoryBudgetExceeded: return "MemoryBudgetExceeded";
        case ErrorKind::UnitCirclePlacePresent: return "UnitCirclePlacePresent";
        case ErrorKind::NoCoverCertificate: return "NoCoverCertificate";
        case ErrorKind::Unsupported: return "Unsupported";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace betarep
