#pragma once

#include <stdexcept>
#include <string>

namespace coxtop {

enum class Errc {
  UnsupportedBond,
  MalformedMatrix,
  SystemMismatch,
  NotFiniteType,
  ReducedInput,
  HypothesisFailed,
  NotDivisible,
  BudgetExceeded,
  ProductMismatch,
  IndexOutOfRange,
  NoGapIndex,
  NotClassified,
  MalformedInput,
  InvalidMorphism,
  NotLevel,
  RankMismatch,
  HasLoops,
  NotFunctorial,
  BadPartition,
  ForbiddenEdge,
  ConfigError,
  UnknownInstance,
  IncompleteSearch,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace coxtop
