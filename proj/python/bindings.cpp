#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "simplex_gibbs/cftp.hpp"
#include "simplex_gibbs/chain.hpp"
#include "simplex_gibbs/couplings.hpp"
#include "simplex_gibbs/errors.hpp"
#include "simplex_gibbs/experiments.hpp"
#include "simplex_gibbs/json_io.hpp"
#include "simplex_gibbs/partitions.hpp"
#include "simplex_gibbs/two_stage.hpp"

namespace py = pybind11;
using namespace simplex_gibbs;

namespace {

// Summaries cross the boundary as JSON text; the python side parses them.
std::string dump(const SummaryReport& r) { return r.to_json().dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gibbs sampler on the simplex: couplings and perfect sampling";

  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_RuntimeError);
  py::register_exception<IntegrityError>(m, "IntegrityError", PyExc_RuntimeError);
  py::register_exception<TerminationError>(m, "TerminationError", PyExc_RuntimeError);

  m.def("step", [](const std::vector<double>& x, std::size_t i, std::size_t j, double lam) {
    if (i < 1 || j < 1) throw ArgumentError("step: coordinates are 1-based");
    return step(SimplexPoint::from_values(x), StepDraw{i - 1, j - 1, lam}).values();
  }, py::arg("x"), py::arg("i"), py::arg("j"), py::arg("lam"));

  m.def("sample_stationary", [](std::size_t n, std::uint64_t seed, const std::string& law) {
    RandomStream rng(seed, 0, 0);
    return sample_stationary(n, LambdaLaw::parse(law), rng).values();
  }, py::arg("n"), py::arg("seed"), py::arg("law") = "uniform");

  m.def("success_probability", &success_probability, py::arg("m"), py::arg("delta"));
  m.def("contraction_factor", &contraction_factor, py::arg("n"),
        py::arg("second_moment") = 1.0 / 3.0);
  m.def("lower_bound_formula", &lower_bound_formula, py::arg("n"));

  m.def("partitions_json", [](const std::string& schedule) {
    return partitions_to_json(build_partitions(schedule_from_json(Json::parse(schedule)))).dump();
  }, py::arg("schedule"));

  m.def("cftp", [](std::size_t n, std::uint64_t seed, const std::string& law) {
    py::gil_scoped_release release;
    return cftp(n, LambdaLaw::parse(law), seed).values();
  }, py::arg("n"), py::arg("seed"), py::arg("law") = "uniform");

  m.def("run_contraction_json", [](std::size_t n, std::size_t replicas, std::uint64_t seed,
                                   const std::string& law) {
    py::gil_scoped_release release;
    return dump(run_contraction(n, replicas, seed, LambdaLaw::parse(law)));
  }, py::arg("n"), py::arg("replicas"), py::arg("seed"), py::arg("law") = "uniform");

  m.def("run_connectivity_json", [](std::size_t n, double epsilon, std::size_t trials,
                                    std::uint64_t seed) {
    py::gil_scoped_release release;
    return dump(run_connectivity(n, epsilon, trials, seed));
  }, py::arg("n"), py::arg("epsilon"), py::arg("trials"), py::arg("seed"));

  m.def("run_couple_json", [](std::size_t n, double C, std::size_t replicas,
                              std::uint64_t seed, const std::string& law) {
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.C = C;
    cfg.replicas = replicas;
    cfg.seed = seed;
    cfg.law = LambdaLaw::parse(law);
    py::gil_scoped_release release;
    return dump(run_couple(cfg));
  }, py::arg("n"), py::arg("C"), py::arg("replicas"), py::arg("seed"),
     py::arg("law") = "uniform");

  m.def("run_cftp_json", [](std::size_t n, std::size_t samples, std::uint64_t seed,
                            const std::string& law) {
    py::gil_scoped_release release;
    return dump(run_cftp(n, samples, seed, LambdaLaw::parse(law)));
  }, py::arg("n"), py::arg("samples"), py::arg("seed"), py::arg("law") = "uniform");

  m.def("run_lower_bound_json", [](std::size_t n, std::size_t trials, std::uint64_t seed) {
    py::gil_scoped_release release;
    return dump(run_lower_bound(n, trials, seed));
  }, py::arg("n"), py::arg("trials"), py::arg("seed"));
}
