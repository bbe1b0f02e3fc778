#pragma once

#include <stdexcept>
#include <string>

namespace ospace {

enum class ErrorKind {
  Structural,            // malformed or invalid graph of groups
  UnknownSymbol,         // syllable or generator not present in the graph
  EllipticWord,          // operation requires a hyperbolic element
  InvalidConfiguration,  // e.g. a thistle that cannot be made legal
  NotAForest,
  NotProper,
  NotAHomomorphism,
  IncompleteDictionary,
  InvalidMetric,
  InfeasibleFloor,
  MalformedPath,
  TooLarge,
  Parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Structural: return "Structural";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::EllipticWord: return "EllipticWord";
    case ErrorKind::InvalidConfiguration: return "InvalidConfiguration";
    case ErrorKind::NotAForest: return "NotAForest";
    case ErrorKind::NotProper: return "NotProper";
    case ErrorKind::NotAHomomorphism: return "NotAHomomorphism";
    case ErrorKind::IncompleteDictionary: return "IncompleteDictionary";
    case ErrorKind::InvalidMetric: return "InvalidMetric";
    case ErrorKind::InfeasibleFloor: return "InfeasibleFloor";
    case ErrorKind::MalformedPath: return "MalformedPath";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ospace
