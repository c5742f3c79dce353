#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hrc/bench.hpp"
#include "hrc/error.hpp"
#include "hrc/eval.hpp"
#include "hrc/persona.hpp"

namespace py = pybind11;
using namespace hrc;

// JSON crosses the boundary as text; the Python package wraps these with json.loads/dumps.
namespace {

std::string run_json(const std::string& config, const std::string& out_dir) {
  auto cfg = bench::RunConfig::from_json(Json::parse(config));
  bench::RunResult r;
  {
    py::gil_scoped_release unlocked;
    r = bench::run(cfg, out_dir);
  }
  return r.summary;
}

std::string replay_json(const std::string& src, const std::string& dst) {
  py::gil_scoped_release unlocked;
  return bench::replay(src, dst).summary;
}

std::string rescore_json(const std::string& dir) { return bench::rescore(dir).to_json().dump(); }

std::string schedule_json(int setting, const std::vector<std::string>& scenes,
                          const std::vector<std::string>& personas) {
  Json out = Json::array();
  for (const auto& d : bench::schedule(setting, scenes, personas)) {
    out.push_back({{"day", d.day}, {"scene", d.scene}, {"persona", d.persona}});
  }
  return out.dump();
}

std::string default_config_json() {
  bench::RunConfig c;
  c.resolve_defaults();
  return c.to_json().dump();
}

std::vector<double> five(const persona::BigFive& b) { return {b.v.begin(), b.v.end()}; }

persona::BigFive from_list(const std::vector<double>& v) {
  if (v.size() != 5) throw ValidationError("a Big Five vector has five values");
  persona::BigFive b;
  std::copy(v.begin(), v.end(), b.v.begin());
  return b;
}

}  // namespace

PYBIND11_MODULE(_hrcbench, m) {
  m.doc() = "Native core of the hrcbench household collaboration benchmark";

  // Translators run newest first, so the base class is registered before its subclasses.
  auto& base = py::register_exception<Error>(m, "HrcError", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<LoadError>(m, "LoadError", PyExc_ValueError);
  py::register_exception<NotFoundError>(m, "NotFoundError", PyExc_LookupError);
  auto& gateway = py::register_exception<GatewayError>(m, "GatewayError", base.ptr());
  py::register_exception<CacheMissError>(m, "CacheMissError", gateway.ptr());

  m.def("run", &run_json, py::arg("config"), py::arg("out_dir"),
        "Runs a benchmark from a JSON config; returns metrics/summary.json text.");
  m.def("replay", &replay_json, py::arg("src"), py::arg("dst"));
  m.def("rescore", &rescore_json, py::arg("run_dir"));
  m.def("report", [](const std::string& dir) { return bench::report(dir); }, py::arg("run_dir"));
  m.def("schedule", &schedule_json, py::arg("setting"), py::arg("scenes"), py::arg("personas"));
  m.def("setting_days", &bench::setting_days, py::arg("setting"));
  m.def("default_config", &default_config_json);

  m.def(
      "hour_f1",
      [](int tp, int fp, int fn) {
        auto s = eval::HourScore::from_counts(tp, fp, fn);
        return py::make_tuple(s.precision, s.recall, s.f1);
      },
      py::arg("tp"), py::arg("fp"), py::arg("fn"), "(precision, recall, f1) from match counts.");
  m.def("l1_between", &eval::l1_between, py::arg("a"), py::arg("b"));
  m.def("pearson", &eval::pearson, py::arg("x"), py::arg("y"));

  m.def("bin_half", &persona::bin_half, py::arg("x"));
  m.def(
      "majority_vote",
      [](const std::vector<std::vector<double>>& samples) {
        std::vector<persona::BigFive> s;
        for (const auto& v : samples) s.push_back(from_list(v));
        return five(persona::majority_vote(s));
      },
      py::arg("samples"));
  m.def(
      "score_big5_test", [](const std::vector<int>& answers) { return five(persona::score_big5_test(answers)); },
      py::arg("answers"));
}
