#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>

#include "coxtop/errors.hpp"
#include "coxtop/formats.hpp"
#include "coxtop/verifier.hpp"

using namespace coxtop;

namespace {

bool throws_code(Errc c, const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == c;
  }
  return false;
}

}  // namespace

TEST_CASE("matrix text round-trips for every preset") {
  for (auto& name : preset_names()) {
    auto sys = preset(name);
    auto cm = parse_matrix(format_matrix(*sys));
    auto back = build_system(cm);
    REQUIRE(back->rank() == sys->rank());
    CHECK(back->gen_names() == sys->gen_names());
    for (int i = 0; i < sys->rank(); ++i)
      for (int j = 0; j < sys->rank(); ++j) CHECK(back->bond(i, j) == sys->bond(i, j));
  }
}

TEST_CASE("parse_matrix accepts comments and infinite bonds") {
  auto cm = parse_matrix("# affine A1\ncoxeter 2\n\ninf   # the only bond\n");
  REQUIRE(cm.m.size() == 2);
  CHECK(cm.m[0][1] == kInfinity);
  CHECK(cm.m[0][0] == 1);

  auto a3 = build_system(parse_matrix("coxeter 3\nnames a b c\n3 2\n3\n"));
  CHECK(a3->bond(0, 2) == 2);
  CHECK(a3->gen_name(2) == "c");
}

TEST_CASE("parse_matrix rejects malformed text") {
  CHECK(throws_code(Errc::MalformedMatrix, [] { parse_matrix(""); }));
  CHECK(throws_code(Errc::MalformedMatrix, [] { parse_matrix("matrix 2\n3\n"); }));
  CHECK(throws_code(Errc::MalformedMatrix, [] { parse_matrix("coxeter 3\n3 2\n"); }));
  CHECK(throws_code(Errc::MalformedMatrix, [] { parse_matrix("coxeter 2\n1\n"); }));
  CHECK(throws_code(Errc::MalformedMatrix, [] { parse_matrix("coxeter 2\nthree\n"); }));
  CHECK(throws_code(Errc::ConfigError, [] { load_system("/nonexistent/matrix.txt"); }));
}

TEST_CASE("words, elements and braid literals") {
  auto a2 = preset("A2");
  CHECK(parse_word(*a2, "1").empty());
  CHECK(parse_word(*a2, "").empty());
  CHECK(parse_word(*a2, "g0 g1").size() == 2);
  auto sts = parse_word(*a2, "sts");
  REQUIRE(sts.size() == 3);
  CHECK(sts[0] == sts[2]);
  CHECK(sts[0] != sts[1]);
  CHECK(parse_element(a2, "sts") == parse_element(a2, "tst"));
  CHECK(parse_element(a2, "ss").length() == 0);
  CHECK(throws_code(Errc::MalformedInput, [&] { parse_word(*a2, "sx"); }));

  auto b = parse_braid(a2, "[sts][s]");
  CHECK(b.length() == 4);
  CHECK(parse_braid(a2, b.str()) == b);
  CHECK(parse_braid(a2, "[]").empty());
  CHECK(parse_braid(a2, "[s][t]") != parse_braid(a2, "[t][s]"));
  CHECK(throws_code(Errc::MalformedInput, [&] { parse_braid(a2, "[ss]"); }));
  CHECK(throws_code(Errc::MalformedInput, [&] { parse_braid(a2, "[s"); }));
  CHECK(throws_code(Errc::MalformedInput, [&] { parse_braid(a2, "s"); }));
}

TEST_CASE("sequence literals") {
  auto a2 = preset("A2");
  auto o = parse_conv_object(a2, "(s, 1, st)");
  REQUIRE(o.size() == 3);
  CHECK(o.letters[1].length() == 0);
  CHECK(o.letters[2].length() == 2);
  CHECK(parse_conv_object(a2, o.str()) == o);
  CHECK(parse_conv_object(a2, "()").size() == 0);
  CHECK(throws_code(Errc::MalformedInput, [&] { parse_conv_object(a2, "s, t"); }));
  CHECK(throws_code(Errc::MalformedInput, [&] { parse_conv_object(a2, "(s,,t)"); }));
  // s0 s1 generates an infinite parabolic.
  auto a1t = preset("A1~");
  CHECK(throws_code(Errc::NotFiniteType, [&] { parse_conv_object(a1t, "(s0 s1)"); }));
}

TEST_CASE("config parsing and validation") {
  auto cfg = parse_config("# demo\nsystem = B2\nsuites = braid-kernel, deletion-property\nmax_length = 5\nseed = 9\n");
  CHECK(cfg.system == "B2");
  CHECK(cfg.suites == std::vector<std::string>{"braid-kernel", "deletion-property"});
  CHECK(cfg.effective_max_length() == 5);
  CHECK(cfg.seed == 9);
  CHECK_NOTHROW(validate_config(cfg));

  CHECK(parse_config("suites = all\n").effective_suites() == suite_names());
  CHECK(parse_config("").effective_max_length() == 5);
  CHECK(parse_config("system = A1~").effective_max_length() == 6);

  CHECK(throws_code(Errc::ConfigError, [] { parse_config("colour = red\n"); }));
  CHECK(throws_code(Errc::ConfigError, [] { parse_config("seed = 1\nseed = 2\n"); }));
  CHECK(throws_code(Errc::ConfigError, [] { parse_config("max_length = five\n"); }));
  CHECK(throws_code(Errc::ConfigError, [] { parse_config("no equals sign\n"); }));
  CHECK(throws_code(Errc::ConfigError, [] { validate_config(parse_config("suites = nope\n")); }));
  CHECK(throws_code(Errc::ConfigError, [] { validate_config(parse_config("max_length = 0\n")); }));
  CHECK(throws_code(Errc::ConfigError, [] { validate_config(parse_config("time_budget = -1\n")); }));
  CHECK(throws_code(Errc::ConfigError, [] { run(parse_config("system = nowhere\n")); }));
}

TEST_CASE("a small run passes and survives a JSON round trip") {
  auto cfg = parse_config("system = A2\nsuites = coxeter-axioms, deletion-property\nmax_length = 5\n");
  auto rep = run(cfg);
  CHECK(rep.exit_code() == 0);
  CHECK(rep.summary.fail == 0);
  CHECK(rep.summary.unknown == 0);
  REQUIRE(rep.suites.size() == 2);
  CHECK(rep.summary.pass > 0);

  auto text = report_to_json(rep);
  auto back = report_from_json(text);
  CHECK(report_to_json(back) == text);
  CHECK(report_to_json(run(cfg)) == text);

  const auto& inst = rep.suites[1].instances.at(0);
  CHECK(rep.find(inst.id) == &inst);
  CHECK(!explain(back, inst.id).empty());
  CHECK(throws_code(Errc::UnknownInstance, [&] { explain(back, "deletion-property:nothing"); }));
  CHECK(throws_code(Errc::MalformedInput, [] { report_from_json("{\"schema\": 3}"); }));
}

TEST_CASE("an empty truncation window passes vacuously with a note") {
  auto rep = run(parse_config("system = A1~\nsuites = bistratified, bis-p0\nmax_letters = 0\ntruncation_length = 0\n"));
  CHECK(rep.exit_code() == 0);
  CHECK(rep.summary.fail == 0);
  CHECK(!rep.notes.empty());
}
