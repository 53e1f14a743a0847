// Copyright 2026 The gramwb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Python bindings. Structured results cross the boundary as plain dicts
// and lists built from the same JSON the service emits, so the three
// front ends agree on every field name.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "gramwb/cli.h"
#include "gramwb/featstruct.h"
#include "gramwb/workbench.h"

namespace py = pybind11;
using nlohmann::json;

namespace gramwb {
namespace {

py::object ToPy(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    case json::value_t::string:
      return py::str(j.get_ref<const std::string&>());
    case json::value_t::array: {
      py::list l;
      for (const auto& e : j) l.append(ToPy(e));
      return l;
    }
    case json::value_t::object: {
      py::dict d;
      for (const auto& [k, v] : j.items()) d[py::str(k)] = ToPy(v);
      return d;
    }
    default:
      return py::none();
  }
}

// Round-trips through the json module; the inputs are small documents.
json FromPy(const py::handle& o) {
  std::string text = py::module_::import("json").attr("dumps")(o).cast<std::string>();
  return json::parse(text);
}

EngineKind EngineArg(const std::string& name) {
  auto e = ParseEngine(name);
  if (!e) throw Error("bad-field", "unknown engine '" + name + "' (chart or td)");
  return *e;
}

// None: session filter; "*": everything; otherwise a list of labels.
std::optional<TraceFilter> TraceArg(const py::object& o) {
  if (o.is_none()) return std::nullopt;
  if (py::isinstance<py::str>(o)) {
    std::string s = o.cast<std::string>();
    if (s == "*") return TraceFilter::All();
    return TraceFilter{false, {s}};
  }
  TraceFilter f;
  for (const auto& l : o) f.labels.insert(l.cast<std::string>());
  return f;
}

class PySession {
 public:
  explicit PySession(const std::string& engine)
      : s_(std::make_shared<Session>("py", EngineArg(engine))) {}

  py::object load(LoadReport (Session::*fn)(std::string_view, std::string_view),
                  const std::string& text, const std::string& source) {
    LoadReport r;
    {
      py::gil_scoped_release release;
      r = ((*s_).*fn)(text, source);
    }
    return ToPy(LoadReportToJson(r));
  }
  py::object load_file(LoadReport (Session::*fn)(const std::string&), const std::string& path) {
    LoadReport r;
    {
      py::gil_scoped_release release;
      r = ((*s_).*fn)(path);
    }
    return ToPy(LoadReportToJson(r));
  }

  std::string engine() const { return std::string(EngineName(s_->engine())); }
  void set_engine(const std::string& name) { s_->set_engine(EngineArg(name)); }
  std::string fingerprint() const { return s_->fingerprint(); }

  py::object check() const { return ToPy(CheckReportToJson(s_->check())); }

  py::object index() const {
    auto g = s_->grammar();
    if (!g) throw Error("no-grammar", "no grammar loaded");
    return ToPy(GrammarIndexToJson(g->grammar));
  }

  // A dict, or rendered text when `format` is given.
  py::object parse(const std::string& sentence, const std::optional<std::string>& engine,
                   bool memo, const py::object& trace,
                   const std::optional<std::string>& format) {
    ParseOptions options;
    if (engine) options.engine = EngineArg(*engine);
    options.memo = memo;
    options.trace = TraceArg(trace);
    std::optional<OutputFormat> out;
    if (format) {
      out = ParseOutputFormat(*format);
      if (!out) throw Error("bad-field", "unknown format '" + *format + "'");
    }
    std::shared_ptr<const ParseOutcome> o;
    {
      py::gil_scoped_release release;
      o = s_->parse_and_keep(sentence, options);
    }
    if (out) return py::str(RenderParse(*o, *out));
    return ToPy(ParseOutcomeToJson(*o));
  }

  // Readings are numbered from 1, as in the command line tool.
  py::object compare_readings(const std::string& sentence, std::size_t a, std::size_t b) const {
    ParseOutcome o;
    {
      py::gil_scoped_release release;
      o = s_->parse(sentence);
    }
    const auto& rs = o.result.readings;
    if (a < 1 || b < 1 || a > rs.size() || b > rs.size()) {
      throw Error("bad-field", "reading out of range (" + std::to_string(rs.size()) + " readings)");
    }
    return ToPy(ReportToJson(CompareTrees(rs[a - 1].tree, rs[b - 1].tree)));
  }

  py::object run_suite(const std::vector<std::string>& dirs, const std::set<std::string>& tags,
                       const std::optional<std::string>& compare_store,
                       const std::optional<std::string>& save_store, std::size_t workers,
                       const std::optional<std::string>& engine) const {
    json warnings = json::array();
    std::vector<TestClass> classes;
    for (const auto& d : dirs) {
      SuiteLoad load = LoadSuiteDirectory(d);
      for (const auto& diag : load.diagnostics) {
        if (diag.severity == Severity::kError) throw Error("suite-format", FormatDiagnostic(diag));
        warnings.push_back(DiagnosticToJson(diag));
      }
      for (auto& c : load.classes) classes.push_back(std::move(c));
    }
    std::vector<Diagnostic> select_warnings;
    auto cases = SelectCases(classes, tags, &select_warnings);
    for (const auto& w : select_warnings) warnings.push_back(DiagnosticToJson(w));

    std::optional<BaselineStore> compare_to, save_to;
    SuiteOptions options;
    options.workers = workers;
    options.fingerprint = s_->fingerprint();
    if (compare_store) options.compare_to = &compare_to.emplace(*compare_store);
    if (save_store) {
      std::vector<Diagnostic> diags;
      Config c;
      c.store_dir = *save_store;
      if (!PrepareConfig(c, diags)) throw Error("store", FormatDiagnostic(diags.front()));
      options.save_to = &save_to.emplace(*save_store);
    }
    SentenceParser parser = s_->sentence_parser(engine ? std::optional(EngineArg(*engine))
                                                       : std::nullopt);
    SuiteRunTable t;
    {
      py::gil_scoped_release release;
      t = RunSuite(cases, parser, options);
    }
    json j = SuiteTableToJson(t);
    j["warnings"] = std::move(warnings);
    return ToPy(j);
  }

  std::string save_baseline(const std::string& store_dir, const std::string& sentence) const {
    std::vector<Diagnostic> diags;
    Config c;
    c.store_dir = store_dir;
    if (!PrepareConfig(c, diags)) throw Error("store", FormatDiagnostic(diags.front()));
    BaselineStore store(store_dir);
    ParseOutcome o = s_->parse(sentence);
    store.save(o.result);
    return store.path_for(sentence);
  }

  // Throws GramwbError("no-baseline") when nothing was saved.
  py::object compare_baseline(const std::string& store_dir, const std::string& sentence) const {
    BaselineStore store(store_dir);
    LoadedBaseline b = store.load(sentence, s_->fingerprint());
    ParseOutcome o = s_->parse(sentence);
    json j = ComparisonToJson(CompareResults(b.result, o.result));
    j["sentence"] = sentence;
    j["warnings"] = b.warnings;
    return ToPy(j);
  }

 private:
  std::shared_ptr<Session> s_;
};

}  // namespace
}  // namespace gramwb

PYBIND11_MODULE(_core, m) {
  using namespace gramwb;
  m.doc() = "Grammar workbench core";

  static py::exception<Error> error(m, "GramwbError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // args = (kind, message)
      py::object type = py::reinterpret_borrow<py::object>(error.ptr());
      py::object exc = type(py::str(e.kind()), py::str(e.what()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<PySession>(m, "Session")
      .def(py::init<const std::string&>(), py::arg("engine") = "chart")
      .def(
          "load_grammar",
          [](PySession& s, const std::string& text, const std::string& source) {
            return s.load(&Session::load_grammar, text, source);
          },
          py::arg("text"), py::arg("source") = "")
      .def(
          "load_lexicon",
          [](PySession& s, const std::string& text, const std::string& source) {
            return s.load(&Session::load_lexicon, text, source);
          },
          py::arg("text"), py::arg("source") = "")
      .def(
          "load_rules",
          [](PySession& s, const std::string& text, const std::string& source) {
            return s.load(&Session::load_interface_rules, text, source);
          },
          py::arg("text"), py::arg("source") = "")
      .def(
          "load_grammar_file",
          [](PySession& s, const std::string& path) {
            return s.load_file(&Session::load_grammar_file, path);
          },
          py::arg("path"))
      .def(
          "load_lexicon_file",
          [](PySession& s, const std::string& path) {
            return s.load_file(&Session::load_lexicon_file, path);
          },
          py::arg("path"))
      .def(
          "load_rules_file",
          [](PySession& s, const std::string& path) {
            return s.load_file(&Session::load_interface_rules_file, path);
          },
          py::arg("path"))
      .def_property("engine", &PySession::engine, &PySession::set_engine)
      .def_property_readonly("fingerprint", &PySession::fingerprint)
      .def("check", &PySession::check)
      .def("index", &PySession::index)
      .def("parse", &PySession::parse, py::arg("sentence"), py::kw_only(),
           py::arg("engine") = py::none(), py::arg("memo") = true, py::arg("trace") = py::none(),
           py::arg("format") = py::none())
      .def("compare_readings", &PySession::compare_readings, py::arg("sentence"), py::arg("a"),
           py::arg("b"))
      .def("run_suite", &PySession::run_suite, py::arg("dirs"), py::kw_only(),
           py::arg("tags") = std::set<std::string>{}, py::arg("compare_store") = py::none(),
           py::arg("save_store") = py::none(), py::arg("workers") = 0,
           py::arg("engine") = py::none())
      .def("save_baseline", &PySession::save_baseline, py::arg("store_dir"), py::arg("sentence"))
      .def("compare_baseline", &PySession::compare_baseline, py::arg("store_dir"),
           py::arg("sentence"));

  m.def(
      "unify",
      [](const std::string& a, const std::string& b) -> py::object {
        Term ta = MustParseTerm(a), tb = MustParseTerm(b);
        // Variables of the two sides are distinct.
        tb = RenameVars(tb, [](const std::string& v) { return v + "'"; });
        Binding env = ta.env;
        env.merge_disjoint(tb.env);
        UnifyOutcome u = Unify(ta.value, tb.value, env);
        if (!u) return py::none();
        return py::str(Render(u.result, u.env));
      },
      py::arg("a"), py::arg("b"), "Canonical text of the unifier, or None on failure.");

  m.def(
      "compare_results",
      [](const py::object& old_result, const py::object& new_result) {
        return ToPy(ComparisonToJson(
            CompareResults(ResultFromJson(FromPy(old_result)), ResultFromJson(FromPy(new_result)))));
      },
      py::arg("old"), py::arg("new"), "Compares two parse results as returned in parse()['result'].");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"gramwb"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line tool; returns (exit code, stdout, stderr).");
}
