#pragma once

#include <string>

#include "coxtop/braid.hpp"
#include "coxtop/conv_schubert.hpp"

namespace coxtop {

// Coxeter matrix text: a `coxeter <rank>` header, an optional `names a b ...` line, then the
// entries above the diagonal row by row (`inf` for an infinite bond). Blank lines and
// `#` comments are ignored. Throws MalformedMatrix.
CoxeterMatrix parse_matrix(const std::string& text);
std::string format_matrix(const CoxeterSystem& sys);
// A preset name, or else a path to a matrix file. Throws ConfigError.
SystemPtr load_system(const std::string& name_or_path);

// Word over generator names: names may be juxtaposed (sts) or space separated (s0 s1);
// g0, g1, ... always work. "1" and "" are the empty word. Throws MalformedInput.
std::vector<int> parse_word(const CoxeterSystem& sys, const std::string& text);
GroupElement parse_element(const SystemPtr& sys, const std::string& text);
// [sts][s] is r(sts) r(s); every bracket must hold a reduced word. "[]" and "" are 1.
BraidElement parse_braid(const SystemPtr& sys, const std::string& text);
// (s, 1, st)
ConvObject parse_conv_object(const SystemPtr& sys, const std::string& text);

}  // namespace coxtop
