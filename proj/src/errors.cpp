#include "coxtop/errors.hpp"

namespace coxtop {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::UnsupportedBond: return "UnsupportedBond";
    case Errc::MalformedMatrix: return "MalformedMatrix";
    case Errc::SystemMismatch: return "SystemMismatch";
    case Errc::NotFiniteType: return "NotFiniteType";
    case Errc::ReducedInput: return "ReducedInput";
    case Errc::HypothesisFailed: return "HypothesisFailed";
    case Errc::NotDivisible: return "NotDivisible";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::ProductMismatch: return "ProductMismatch";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::NoGapIndex: return "NoGapIndex";
    case Errc::NotClassified: return "NotClassified";
    case Errc::MalformedInput: return "MalformedInput";
    case Errc::InvalidMorphism: return "InvalidMorphism";
    case Errc::NotLevel: return "NotLevel";
    case Errc::RankMismatch: return "RankMismatch";
    case Errc::HasLoops: return "HasLoops";
    case Errc::NotFunctorial: return "NotFunctorial";
    case Errc::BadPartition: return "BadPartition";
    case Errc::ForbiddenEdge: return "ForbiddenEdge";
    case Errc::ConfigError: return "ConfigError";
    case Errc::UnknownInstance: return "UnknownInstance";
    case Errc::IncompleteSearch: return "IncompleteSearch";
  }
  return "Error";
}

}  // namespace coxtop
