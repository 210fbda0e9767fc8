#include "coxtop/formats.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "coxtop/errors.hpp"

namespace coxtop {

namespace {

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

int parse_bond(const std::string& tok) {
  if (tok == "inf" || tok == "infinity") return kInfinity;
  std::size_t used = 0;
  int m = 0;
  try {
    m = std::stoi(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || m < 2) throw Error(Errc::MalformedMatrix, "bad entry '" + tok + "'");
  return m;
}

}  // namespace

CoxeterMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> tokens;
  CoxeterMatrix cm;
  int n = -1;
  while (std::getline(in, line)) {
    line = strip(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (n < 0) {
      if (head != "coxeter" || !(ls >> n) || n < 1 || n > kMaxRank)
        throw Error(Errc::MalformedMatrix, "expected 'coxeter <rank>' header");
      continue;
    }
    if (head == "names") {
      for (std::string nm; ls >> nm;) cm.names.push_back(nm);
      continue;
    }
    tokens.push_back(head);
    for (std::string t; ls >> t;) tokens.push_back(t);
  }
  if (n < 0) throw Error(Errc::MalformedMatrix, "empty matrix file");
  if (int(tokens.size()) != n * (n - 1) / 2)
    throw Error(Errc::MalformedMatrix, "expected " + std::to_string(n * (n - 1) / 2) + " entries above the diagonal");
  cm.m.assign(n, std::vector<int>(n, 1));
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) cm.m[i][j] = cm.m[j][i] = parse_bond(tokens[k++]);
  return cm;
}

std::string format_matrix(const CoxeterSystem& sys) {
  std::string out = "coxeter " + std::to_string(sys.rank()) + "\nnames";
  for (auto& nm : sys.gen_names()) out += " " + nm;
  out += "\n";
  for (int i = 0; i + 1 < sys.rank(); ++i) {
    for (int j = i + 1; j < sys.rank(); ++j) {
      if (j > i + 1) out += " ";
      out += sys.bond(i, j) == kInfinity ? "inf" : std::to_string(sys.bond(i, j));
    }
    out += "\n";
  }
  return out;
}

SystemPtr load_system(const std::string& name_or_path) {
  for (auto& p : preset_names())
    if (p == name_or_path) return preset(p);
  std::ifstream f(name_or_path);
  if (!f) throw Error(Errc::ConfigError, "'" + name_or_path + "' is neither a preset nor a readable file");
  std::stringstream ss;
  ss << f.rdbuf();
  auto cm = parse_matrix(ss.str());
  if (cm.label.empty()) cm.label = std::filesystem::path(name_or_path).stem().string();
  return build_system(cm);
}

std::vector<int> parse_word(const CoxeterSystem& sys, const std::string& text) {
  std::vector<int> word;
  std::istringstream in(text);
  for (std::string tok; in >> tok;) {
    if (tok == "1") continue;
    std::size_t i = 0;
    while (i < tok.size()) {
      // Longest generator name at position i; g<k> is an alias of generator k.
      int best = -1;
      std::size_t len = 0;
      for (int s = 0; s < sys.rank(); ++s)
        for (auto& nm : {sys.gen_name(s), "g" + std::to_string(s)})
          if (nm.size() > len && tok.compare(i, nm.size(), nm) == 0) best = s, len = nm.size();
      if (best < 0) throw Error(Errc::MalformedInput, "unknown generator in '" + tok + "'");
      word.push_back(best);
      i += len;
    }
  }
  return word;
}

GroupElement parse_element(const SystemPtr& sys, const std::string& text) {
  return GroupElement::from_word(sys, parse_word(*sys, text));
}

BraidElement parse_braid(const SystemPtr& sys, const std::string& text) {
  std::string t = strip(text);
  std::vector<GroupElement> factors;
  std::size_t i = 0;
  while (i < t.size()) {
    if (std::isspace(static_cast<unsigned char>(t[i]))) {
      ++i;
      continue;
    }
    if (t[i] != '[') throw Error(Errc::MalformedInput, "braid literal: expected '[' in '" + t + "'");
    auto close = t.find(']', i);
    if (close == std::string::npos) throw Error(Errc::MalformedInput, "braid literal: missing ']' in '" + t + "'");
    auto word = parse_word(*sys, t.substr(i + 1, close - i - 1));
    auto w = GroupElement::from_word(sys, word);
    if (w.length() != int(word.size()))
      throw Error(Errc::MalformedInput, "braid literal: '" + t.substr(i, close - i + 1) + "' is not reduced");
    factors.push_back(w);
    i = close + 1;
  }
  return BraidElement::from_factors(sys, std::move(factors));
}

ConvObject parse_conv_object(const SystemPtr& sys, const std::string& text) {
  std::string t = strip(text);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')')
    throw Error(Errc::MalformedInput, "sequence literal must be parenthesized: '" + t + "'");
  std::vector<GroupElement> letters;
  std::string body = strip(t.substr(1, t.size() - 2));
  if (!body.empty()) {
    std::istringstream in(body);
    for (std::string part; std::getline(in, part, ',');) {
      part = strip(part);
      if (part.empty()) throw Error(Errc::MalformedInput, "empty letter in '" + t + "'");
      letters.push_back(parse_element(sys, part));
    }
  }
  return make_conv_object(std::move(letters));
}

}  // namespace coxtop
