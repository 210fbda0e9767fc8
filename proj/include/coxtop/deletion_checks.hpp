#pragma once

#include <functional>
#include <string>
#include <vector>

#include "coxtop/word_posets.hpp"

namespace coxtop {

// Running count of one family of checks.
struct CheckTally {
  std::string name;
  long instances = 0, failures = 0;
  std::string first_failure;

  void record(bool ok, const std::function<std::string()>& what);
  bool ok() const { return failures == 0; }
};

struct ApparatusOptions {
  bool certify = true;  // certificates for Word_fn, Word_f, Word_fr
  bool proof = true;    // deletion patterns, strata, blocks, gap posets
  bool pushout = true;  // homology pushout square per stratum
  CertifyOptions cert;
};

struct ApparatusReport {
  BraidElement b;
  int D = 0;
  int word_f_size = 0, word_fn_size = 0, word_fr_size = 0;
  Certificate fn, f, fr;
  std::vector<CheckTally> checks;

  bool ok() const;
  const CheckTally* find(const std::string& name) const;
};

// Verifies the contractibility of Word_fn(b) and every step of the deletion argument
// on one nonreduced b.
ApparatusReport check_delete_thm(const BraidElement& b, const ApparatusOptions& opt = {});

// Checks on Word_s^{1f}(w): the map v -> L(v_1), its fibers, the retraction onto the
// first-letter-Delta_T part and its terminal object. Returns false with a reason on failure.
bool check_word_s_1f(const SystemPtr& sys, int s, const GroupElement& w, std::string* why = nullptr,
                     const CertifyOptions& opt = {});

}  // namespace coxtop
