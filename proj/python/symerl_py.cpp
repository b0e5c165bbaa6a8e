// Python bindings: parsing, fact dumps, verification and ground runs.

#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "symerl/concrete.hpp"
#include "symerl/driver.hpp"
#include "symerl/frontend.hpp"
#include "symerl/residual.hpp"
#include "symerl/translator.hpp"

namespace py = pybind11;
using namespace symerl;

namespace {

FunName parse_fun(const std::string& text) {
  auto slash = text.rfind('/');
  if (slash == std::string::npos || slash == 0) throw py::value_error("expected name/arity, got " + text);
  try {
    return {text.substr(0, slash), static_cast<unsigned>(std::stoul(text.substr(slash + 1)))};
  } catch (const std::exception&) {
    throw py::value_error("expected name/arity, got " + text);
  }
}

std::vector<std::string> messages(const std::vector<Diagnostic>& ds) {
  std::vector<std::string> out;
  for (const Diagnostic& d : ds) out.push_back(d.to_string());
  return out;
}

FunTable table_of(const std::string& source) {
  ParseResult pr = parse_module(source);
  if (!pr.ok() || has_errors(pr.diagnostics)) throw py::value_error(messages(pr.diagnostics).front());
  TranslateResult tr = translate_module(*pr.module);
  if (!tr.table) throw py::value_error(messages(tr.diagnostics).front());
  return *tr.table;
}

Verdict run_verify(const std::string& source, const std::string& fun, int bound, const std::string& skeleton,
                   std::optional<std::size_t> max_answers, VarId seed) {
  VerifyOptions o;
  o.fun = parse_fun(fun);
  o.bound = bound;
  auto spec = SkeletonSpec::parse(skeleton);
  if (!spec) throw py::value_error("bad skeleton " + skeleton);
  o.skeleton = *spec;
  o.max_answers = max_answers;
  o.seed = seed;
  py::gil_scoped_release release;
  return verify_source(source, o);
}

}  // namespace

PYBIND11_MODULE(symerl, m) {
  m.doc() = "Bounded symbolic verification of sequential Core Erlang";

  m.def(
      "parse",
      [](const std::string& source) {
        ParseResult pr = parse_module(source);
        py::dict d;
        bool ok = pr.ok() && !has_errors(pr.diagnostics);
        d["ok"] = ok;
        d["diagnostics"] = messages(pr.diagnostics);
        d["pretty"] = ok ? py::cast(pretty_print(*pr.module)) : py::none();
        return d;
      },
      py::arg("source"), "Parses a module; returns ok, diagnostics and the pretty-printed text.");

  m.def(
      "dump_facts", [](const std::string& source) { return dump_facts(table_of(source)); }, py::arg("source"),
      "Translated function table in the fact notation.");

  m.def(
      "verify",
      [](const std::string& source, const std::string& fun, int bound, const std::string& skeleton,
         std::optional<std::size_t> max_answers, VarId seed) {
        Verdict v = run_verify(source, fun, bound, skeleton, max_answers, seed);
        py::dict d = py::module_::import("json").attr("loads")(render_json(v));
        d["exit_code"] = exit_code(v);
        return d;
      },
      py::arg("source"), py::arg("fun"), py::arg("bound") = 20, py::arg("skeleton") = "general",
      py::arg("max_answers") = py::none(), py::arg("seed") = 0, "Runs verify and returns the JSON report as a dict.");

  m.def(
      "verify_text",
      [](const std::string& source, const std::string& fun, int bound, const std::string& skeleton,
         std::optional<std::size_t> max_answers, VarId seed) {
        return render_text(run_verify(source, fun, bound, skeleton, max_answers, seed));
      },
      py::arg("source"), py::arg("fun"), py::arg("bound") = 20, py::arg("skeleton") = "general",
      py::arg("max_answers") = py::none(), py::arg("seed") = 0, "Runs verify and returns the text report.");

  m.def(
      "concrete_run",
      [](const std::string& source, const std::string& fun, const std::vector<std::string>& inputs, int fuel) {
        FunTable tbl = table_of(source);
        std::vector<Term> args;
        for (const std::string& s : inputs) {
          try {
            args.push_back(parse_ground_term(s));
          } catch (const std::exception& e) {
            throw py::value_error(e.what());
          }
        }
        ConcreteResult r;
        try {
          r = concrete_run(tbl, parse_fun(fun), args, fuel);
        } catch (const std::invalid_argument& e) {
          throw py::value_error(e.what());
        } catch (const FunctionNotFound& e) {
          throw py::value_error(e.what());
        }
        py::dict d;
        switch (r.kind) {
          case ConcreteResult::Kind::Value:
            d["kind"] = "value";
            d["value"] = render_term(r.value);
            d["erlang"] = erlang_value(r.value);
            break;
          case ConcreteResult::Kind::Error:
            d["kind"] = "error";
            d["error"] = r.error;
            break;
          case ConcreteResult::Kind::FuelExhausted: d["kind"] = "fuel_exhausted"; break;
        }
        return d;
      },
      py::arg("source"), py::arg("fun"), py::arg("inputs"), py::arg("fuel") = 100,
      "Ground run; inputs use the lit/cons/tuple notation, e.g. cons(lit(int,1),lit(list,nil)).");
}
