#include "fsum/approximation.hpp"
#include "fsum/error.hpp"
#include "fsum/fisher_f.hpp"
#include "fsum/metrics.hpp"
#include "fsum/montecarlo.hpp"
#include "fsum/sum_dist.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

fsum::BranchSet to_branches(const py::object& obj) {
    if (py::isinstance<fsum::BranchSet>(obj))
        return obj.cast<fsum::BranchSet>();
    if (py::isinstance<fsum::FadingParams>(obj))
        return fsum::BranchSet::iid(obj.cast<fsum::FadingParams>(), 1);
    return fsum::BranchSet(obj.cast<std::vector<fsum::FadingParams>>());
}

py::array_t<double> as_array(std::vector<double> v) {
    auto* heap = new std::vector<double>(std::move(v));
    py::capsule owner(heap, [](void* p) { delete static_cast<std::vector<double>*>(p); });
    return py::array_t<double>(heap->size(), heap->data(), owner);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sums of Fisher-Snedecor F variables: exact, approximate and simulated statistics";

    py::register_exception<fsum::Error>(m, "FsumError", PyExc_RuntimeError);

    py::enum_<fsum::Method>(m, "Method")
        .value("exact_h", fsum::Method::exact_h)
        .value("single_f", fsum::Method::single_f)
        .value("asymptotic", fsum::Method::asymptotic)
        .value("monte_carlo", fsum::Method::monte_carlo)
        .value("oracle", fsum::Method::oracle);

    py::enum_<fsum::MetricKind>(m, "Metric")
        .value("op", fsum::MetricKind::outage)
        .value("ec", fsum::MetricKind::effective_capacity)
        .value("cifr", fsum::MetricKind::cifr)
        .value("tifr", fsum::MetricKind::tifr)
        .value("ora", fsum::MetricKind::ora)
        .value("opra", fsum::MetricKind::opra);

    py::class_<fsum::FadingParams>(m, "FadingParams")
        .def(py::init([](double mm, double ms, double mean) {
                 fsum::FadingParams p{mm, ms, mean};
                 p.validate();
                 return p;
             }),
             "m"_a, "ms"_a, "mean_snr"_a = 1.0)
        .def_readwrite("m", &fsum::FadingParams::m)
        .def_readwrite("ms", &fsum::FadingParams::ms)
        .def_readwrite("mean_snr", &fsum::FadingParams::mean_snr)
        .def("__repr__", [](const fsum::FadingParams& p) {
            return "FadingParams(m=" + std::to_string(p.m) + ", ms=" + std::to_string(p.ms) +
                   ", mean_snr=" + std::to_string(p.mean_snr) + ")";
        });

    py::class_<fsum::BranchSet>(m, "BranchSet")
        .def(py::init([](const std::vector<fsum::FadingParams>& b) {
                 fsum::BranchSet s(b);
                 s.validate();
                 return s;
             }),
             "branches"_a)
        .def_static("iid", &fsum::BranchSet::iid, "params"_a, "count"_a)
        .def_readonly("branches", &fsum::BranchSet::branches)
        .def("__len__", &fsum::BranchSet::size)
        .def("total_mean", &fsum::BranchSet::total_mean)
        .def("__repr__", &fsum::BranchSet::describe);

    py::class_<fsum::MetricResult>(m, "MetricResult")
        .def_readonly("value", &fsum::MetricResult::value)
        .def_readonly("method", &fsum::MetricResult::method)
        .def_readonly("error_estimate", &fsum::MetricResult::error_estimate)
        .def_readonly("diagnostics", &fsum::MetricResult::diagnostics)
        .def_readonly("notes", &fsum::MetricResult::notes);

    m.def("db_to_linear", &fsum::db_to_linear);
    m.def("linear_to_db", &fsum::linear_to_db);

    m.def("f_pdf", &fsum::fisher_f::pdf, "params"_a, "gamma"_a);
    m.def("f_cdf", &fsum::fisher_f::cdf, "params"_a, "gamma"_a);
    m.def("f_moment", &fsum::fisher_f::moment, "params"_a, "n"_a);

    m.def(
        "sum_pdf", [](const py::object& b, double z, double tol) { return fsum::sum_pdf(to_branches(b), z, tol); },
        "branches"_a, "z"_a, "tol"_a = 0.0);
    m.def(
        "sum_cdf", [](const py::object& b, double z, double tol) { return fsum::sum_cdf(to_branches(b), z, tol); },
        "branches"_a, "z"_a, "tol"_a = 0.0);
    m.def(
        "sum_cdf_asymptotic",
        [](const py::object& b, double z) { return fsum::sum_cdf_asymptotic(to_branches(b), z); }, "branches"_a,
        "z"_a);
    m.def(
        "laplace_pdf",
        [](const py::object& b, double z) { return fsum::laplace_inversion_pdf(to_branches(b), z); }, "branches"_a,
        "z"_a);
    m.def(
        "laplace_cdf",
        [](const py::object& b, double z) { return fsum::laplace_inversion_cdf(to_branches(b), z); }, "branches"_a,
        "z"_a);

    m.def(
        "match_moments",
        [](const py::object& b, double eps) { return fsum::match_moments(to_branches(b), eps); }, "branches"_a,
        "epsilon"_a = 0.0);
    m.def("ks_critical", &fsum::ks_critical, "v"_a, "alpha"_a = 0.05);

    m.def(
        "sample_sum",
        [](const py::object& b, std::size_t count, std::uint64_t seed) {
            fsum::SampleSet s;
            {
                py::gil_scoped_release release;
                s = fsum::sample_sum(to_branches(b), count, seed);
            }
            return as_array(std::move(s.draws));
        },
        "branches"_a, "count"_a, "seed"_a = 1, "Sorted draws of the branch sum.");

    m.def(
        "metric",
        [](fsum::MetricKind kind, const py::object& b, std::optional<fsum::Method> method, double threshold,
           double delay_exponent, double cutoff, double s_reg, std::size_t samples, std::uint64_t seed,
           double epsilon) {
            fsum::MetricRequest req;
            req.branches = to_branches(b);
            req.method = method;
            req.threshold = threshold;
            req.delay_exponent = delay_exponent;
            req.cutoff = cutoff;
            req.s_reg = s_reg;
            req.mc_samples = samples;
            req.seed = seed;
            req.epsilon = epsilon;
            py::gil_scoped_release release;
            return fsum::evaluate_metric(kind, req);
        },
        "kind"_a, "branches"_a, "method"_a = py::none(), "threshold"_a = 1.0, "delay_exponent"_a = 1.0,
        "cutoff"_a = 1.0, "s_reg"_a = 1e-6, "samples"_a = 100000, "seed"_a = 1, "epsilon"_a = 0.0);

    m.def(
        "solve_gamma0",
        [](const py::object& b, std::optional<fsum::Method> method, std::size_t samples, std::uint64_t seed) {
            fsum::MetricRequest req;
            req.branches = to_branches(b);
            req.method = method;
            req.mc_samples = samples;
            req.seed = seed;
            const fsum::Gamma0Result r = fsum::solve_gamma0(req);
            return py::dict("gamma0"_a = r.gamma0, "residual"_a = r.residual, "iterations"_a = r.iterations);
        },
        "branches"_a, "method"_a = py::none(), "samples"_a = 100000, "seed"_a = 1);

    m.def("capacity_awgn", &fsum::capacity_awgn, "total_snr"_a);
}
