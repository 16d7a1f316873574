#include "breeder/error.hpp"

namespace breeder {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidGenome: return "InvalidGenome";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownConnection: return "UnknownConnection";
    case ErrorCode::DisabledConnection: return "DisabledConnection";
    case ErrorCode::PaletteMismatch: return "PaletteMismatch";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::Saturated: return "Saturated";
    case ErrorCode::AllZeros: return "AllZeros";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::UnknownGenome: return "UnknownGenome";
    case ErrorCode::UnknownImage: return "UnknownImage";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::InvalidSlot: return "InvalidSlot";
    case ErrorCode::EmptyTitle: return "EmptyTitle";
    case ErrorCode::StoreCorrupt: return "StoreCorrupt";
    case ErrorCode::PortInUse: return "PortInUse";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace breeder
