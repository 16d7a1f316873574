#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace breeder {

enum class ErrorCode {
  InvalidGenome,
  UnknownNode,
  UnknownConnection,
  DisabledConnection,
  PaletteMismatch,
  EmptySelection,
  IndexOutOfRange,
  EmptyGraph,
  TooLarge,
  TooSmall,
  Infeasible,
  Saturated,
  AllZeros,
  DegenerateSample,
  EmptyCorpus,
  UnknownGenome,
  UnknownImage,
  UnknownSession,
  InvalidSlot,
  EmptyTitle,
  StoreCorrupt,
  PortInUse,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// service layer can map it onto a status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace breeder
