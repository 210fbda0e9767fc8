#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coxtop/braid.hpp"
#include "coxtop/conv_checks.hpp"
#include "coxtop/deletion_checks.hpp"
#include "coxtop/errors.hpp"
#include "coxtop/formats.hpp"
#include "coxtop/verifier.hpp"

namespace py = pybind11;
using namespace coxtop;

namespace {

// SystemPtr points to const, which pybind holders do not take directly.
struct System {
  SystemPtr p;
};

WordFilter filter_from(const std::string& name) {
  if (name == "all") return WordFilter::All;
  if (name == "f") return WordFilter::F;
  if (name == "fr") return WordFilter::FR;
  if (name == "fn") return WordFilter::FN;
  throw Error(Errc::MalformedInput, "word filter must be all, f, fr or fn, not '" + name + "'");
}

py::dict cert_dict(const Certificate& c) {
  py::dict d;
  d["level"] = cert_level_name(c.level);
  d["contractible"] = c.contractible();
  d["witness_kind"] = c.witness_kind;
  d["witness"] = c.witness;
  d["detail"] = c.detail;
  return d;
}

py::list checks_list(const std::vector<CheckTally>& checks) {
  py::list out;
  for (auto& t : checks) {
    py::dict d;
    d["name"] = t.name;
    d["instances"] = t.instances;
    d["failures"] = t.failures;
    d["first_failure"] = t.first_failure;
    out.append(d);
  }
  return out;
}

Truncation truncation(const System& s, int max_length, int max_letters) {
  TruncationSpec spec;
  spec.max_length = max_length;
  spec.max_letters = max_letters;
  return Truncation::build(s.p, spec);
}

}  // namespace

PYBIND11_MODULE(_coxtop, m) {
  m.doc() = "Coxeter groups, Artin monoids and contractibility checks for their word posets";
  m.attr("__version__") = kToolVersion;

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  m.def("presets", &preset_names);

  py::class_<GroupElement>(m, "Element")
      .def_property_readonly("length", &GroupElement::length)
      .def_property_readonly("word", &GroupElement::word)
      .def("__str__", &GroupElement::str)
      .def("__repr__", [](const GroupElement& w) { return "<Element " + w.str() + ">"; })
      .def("__mul__", &multiply)
      .def("inverse", &inverse)
      .def("demazure_mul", &demazure_mul)
      .def("bruhat_leq", &bruhat_leq)
      .def("prefix_leq", &prefix_leq)
      .def("__eq__", [](const GroupElement& a, const GroupElement& b) { return a == b; })
      .def("__hash__", &GroupElement::hash);

  py::class_<BraidElement>(m, "Braid")
      .def_property_readonly("length", &BraidElement::length)
      .def_property_readonly("word", &BraidElement::word)
      .def_property_readonly("factors", &BraidElement::factors)
      .def("__str__", &BraidElement::str)
      .def("__repr__", [](const BraidElement& b) { return "<Braid " + b.str() + ">"; })
      .def("__mul__", &bmul)
      .def("__eq__", [](const BraidElement& a, const BraidElement& b) { return a == b; })
      .def("__hash__", &BraidElement::hash)
      .def("is_reduced", &is_reduced)
      .def("demazure", &demazure)
      .def("left_divides", &left_divides)
      .def("left_gcd", &left_gcd);

  py::class_<System>(m, "System")
      .def(py::init([](const std::string& name_or_path) { return System{load_system(name_or_path)}; }),
           py::arg("name_or_path"))
      .def_static("from_matrix", [](const std::string& text) { return System{build_system(parse_matrix(text))}; })
      .def_property_readonly("rank", [](const System& s) { return s.p->rank(); })
      .def_property_readonly("names", [](const System& s) { return s.p->gen_names(); })
      .def("bond", [](const System& s, int i, int j) {
        if (i < 0 || j < 0 || i >= s.p->rank() || j >= s.p->rank())
          throw Error(Errc::IndexOutOfRange, "generator index");
        int m = s.p->bond(i, j);
        return m == kInfinity ? py::object(py::float_(INFINITY)) : py::object(py::int_(m));
      })
      .def("matrix_text", [](const System& s) { return format_matrix(*s.p); })
      .def("element", [](const System& s, const std::string& w) { return parse_element(s.p, w); })
      .def("braid", [](const System& s, const std::string& lit) { return parse_braid(s.p, lit); })
      .def("lift", [](const System&, const GroupElement& w) { return lift(w); })
      .def("braids", [](const System& s, int max_length) { return enumerate_braids(s.p, max_length); },
           py::arg("max_length"))
      .def("demazure_product", [](const System& s, const std::vector<GroupElement>& seq) {
        return demazure_product(s.p, seq);
      });

  m.def(
      "word_poset_size",
      [](const BraidElement& b, const std::string& filter) { return enumerate_word(b, filter_from(filter)).size(); },
      py::arg("braid"), py::arg("filter") = "fn");

  m.def(
      "certify_word_poset",
      [](const BraidElement& b, const std::string& filter, std::uint64_t seed) {
        CertifyOptions opt;
        opt.seed = seed;
        return cert_dict(certify_contractible(enumerate_word(b, filter_from(filter)).poset, opt));
      },
      py::arg("braid"), py::arg("filter") = "fn", py::arg("seed") = 0);

  m.def(
      "check_deletion_apparatus",
      [](const BraidElement& b) {
        auto r = check_delete_thm(b);
        py::dict d;
        d["ok"] = r.ok();
        d["D"] = r.D;
        d["sizes"] = py::dict(py::arg("f") = r.word_f_size, py::arg("fn") = r.word_fn_size,
                              py::arg("fr") = r.word_fr_size);
        d["fn"] = cert_dict(r.fn);
        d["f"] = cert_dict(r.f);
        d["fr"] = cert_dict(r.fr);
        d["checks"] = checks_list(r.checks);
        return d;
      },
      py::arg("braid"));

  m.def(
      "check_bistratified",
      [](const System& s, int max_length, int max_letters, bool materialized) {
        auto T = truncation(s, max_length, max_letters);
        auto r = materialized ? check_bistratified_materialized(T) : check_bistratified(T);
        py::dict d;
        d["ok"] = r.ok();
        d["objects"] = r.objects;
        d["levels"] = r.levels;
        d["morphisms"] = r.morphisms;
        d["level_nonbasic"] = r.level_nonbasic;
        d["checks"] = checks_list(r.checks);
        return d;
      },
      py::arg("system"), py::arg("max_length"), py::arg("max_letters"), py::arg("materialized") = false);

  m.def(
      "check_down_contractible",
      [](const System& s, int max_length, int max_letters) {
        auto r = check_down_contractible(truncation(s, max_length, max_letters));
        py::dict d;
        d["ok"] = r.ok();
        d["levels"] = r.levels.size();
        d["checks"] = checks_list(r.checks);
        return d;
      },
      py::arg("system"), py::arg("max_length"), py::arg("max_letters"));

  m.def(
      "check_strong_composability",
      [](const System& s, int max_length, int max_letters, int max_sequence) {
        auto r = check_strong_composability(truncation(s, max_length, max_letters), max_sequence);
        py::dict d;
        d["ok"] = r.ok();
        d["sequences"] = r.sequences;
        d["not_composable"] = r.not_composable;
        d["checks"] = checks_list({r.check});
        return d;
      },
      py::arg("system"), py::arg("max_length"), py::arg("max_letters"), py::arg("max_sequence") = 4);

  m.def("run_json", [](const std::string& config_text) {
    auto cfg = parse_config(config_text);
    py::gil_scoped_release release;
    return report_to_json(run(cfg));
  });
  m.def("explain", [](const std::string& report_json, const std::string& id) {
    return explain(report_from_json(report_json), id);
  });
}
