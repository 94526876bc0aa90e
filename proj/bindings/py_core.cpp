// Python bindings for the pole-clustering estimation library.
//
// The module mirrors the C++ API one-to-one: value types become small classes
// with the same field names, vectors of std::complex become lists of python
// complex numbers, and grid fields expose their samples as (ny, nx) numpy
// arrays. Everything heavy stays in C++.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ptrans/density.hpp"
#include "ptrans/estimate.hpp"
#include "ptrans/harness.hpp"
#include "ptrans/model.hpp"
#include "ptrans/pencil.hpp"
#include "ptrans/ptransform.hpp"
#include "ptrans/rng.hpp"

namespace py = pybind11;
using namespace ptrans;

namespace {

/// Copies a row-major scalar grid into a (ny, nx) numpy array.
py::array_t<double> field_values(const GridField& field) {
  py::array_t<double> out({field.lattice.ny, field.lattice.nx});
  std::copy(field.values.begin(), field.values.end(), out.mutable_data());
  return out;
}

py::array_t<std::uint8_t> field_mask(const GridField& field) {
  py::array_t<std::uint8_t> out({field.lattice.ny, field.lattice.nx});
  std::copy(field.mask.begin(), field.mask.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Estimation of discrete complex measures from noisy moments: "
      "Hankel-pencil interpolation, condensed spectral densities, the "
      "pseudosample-averaged pole transform, and cluster-based parameter "
      "recovery.";

  py::register_exception<SingularPencil>(m, "SingularPencil", PyExc_RuntimeError);
  py::register_exception<IllConditionedVandermonde>(m, "IllConditionedVandermonde",
                                                    PyExc_RuntimeError);

  // ---- random streams -----------------------------------------------------
  py::class_<NoiseSpec>(m, "NoiseSpec",
                        "Keyed noise source: per-sample level sigma with "
                        "E|v|^2 = sigma^2, addressed by (seed, stream).")
      .def(py::init<>())
      .def(py::init([](double sigma, std::uint64_t seed, std::uint64_t stream) {
             return NoiseSpec{sigma, seed, stream};
           }),
           py::arg("sigma"), py::arg("seed") = 0, py::arg("stream") = 0)
      .def_readwrite("sigma", &NoiseSpec::sigma)
      .def_readwrite("seed", &NoiseSpec::seed)
      .def_readwrite("stream", &NoiseSpec::stream)
      .def("__repr__", [](const NoiseSpec& s) {
        return "NoiseSpec(sigma=" + std::to_string(s.sigma) +
               ", seed=" + std::to_string(s.seed) +
               ", stream=" + std::to_string(s.stream) + ")";
      });

  m.def("complex_gaussian_vector", &complex_gaussian_vector, py::arg("n"), py::arg("spec"),
        "n iid circular complex gaussian draws with E|v_k|^2 = spec.sigma^2.");
  m.def("substream", &substream, py::arg("stream"), py::arg("salt"),
        "Derives a fresh stream id from (stream, salt).");

  // ---- measures and moments ----------------------------------------------
  py::class_<ComplexMeasure>(m, "ComplexMeasure",
                             "Discrete complex measure: point masses weights[j] "
                             "at nodes[j] in the complex plane.")
      .def(py::init<>())
      .def(py::init([](std::vector<Complex> nodes, std::vector<Complex> weights) {
             ComplexMeasure out{std::move(nodes), std::move(weights)};
             out.validate();
             return out;
           }),
           py::arg("nodes"), py::arg("weights"))
      .def_readwrite("nodes", &ComplexMeasure::nodes)
      .def_readwrite("weights", &ComplexMeasure::weights)
      .def("size", &ComplexMeasure::size)
      .def("validate", &ComplexMeasure::validate)
      .def("__len__", &ComplexMeasure::size)
      .def("__repr__", [](const ComplexMeasure& mm) {
        return "ComplexMeasure(p=" + std::to_string(mm.size()) + ")";
      });

  py::class_<MomentSequence>(m, "MomentSequence",
                             "Moment vector a_0..a_{n-1}; sigma records the "
                             "noise level the values carry.")
      .def(py::init<>())
      .def(py::init([](std::vector<Complex> values, double sigma) {
             return MomentSequence{std::move(values), sigma};
           }),
           py::arg("values"), py::arg("sigma") = 0.0)
      .def_readwrite("values", &MomentSequence::values)
      .def_readwrite("sigma", &MomentSequence::sigma)
      .def_property_readonly("n", &MomentSequence::n)
      .def("__len__", &MomentSequence::n)
      .def("__repr__", [](const MomentSequence& s) {
        return "MomentSequence(n=" + std::to_string(s.n()) +
               ", sigma=" + std::to_string(s.sigma) + ")";
      });

  m.def("gen_moments", &gen_moments, py::arg("measure"), py::arg("n"),
        "Clean moments s_k = sum_j c_j xi_j^k for k = 0..n-1 (n even, >= 2).");
  m.def("add_noise", &add_noise, py::arg("clean"), py::arg("spec"),
        "Adds one circular complex gaussian draw per moment.");
  m.def("snr", &snr, py::arg("measure"), py::arg("sigma"),
        "min_j |c_j| / sigma.");

  // ---- pencil interpolation ----------------------------------------------
  py::class_<PencilSolution>(m, "PencilSolution",
                             "Poles with matched residues, sorted by "
                             "descending |residue|.")
      .def_readonly("poles", &PencilSolution::poles)
      .def_readonly("residues", &PencilSolution::residues)
      .def_readonly("condition_flag", &PencilSolution::condition_flag)
      .def("__repr__", [](const PencilSolution& s) {
        return "PencilSolution(m=" + std::to_string(s.poles.size()) + ")";
      });

  m.def("interpolate", &interpolate, py::arg("moments"),
        "Full interpolation step: n/2 poles and residues from one moment "
        "vector. Raises SingularPencil / IllConditionedVandermonde on "
        "degenerate inputs.");

  // ---- lattices and fields ------------------------------------------------
  py::class_<Lattice>(m, "Lattice",
                      "Regular rectangular lattice; node (ix, iy) sits at "
                      "(x_min + ix hx, y_min + iy hy).")
      .def(py::init<>())
      .def(py::init([](double x_min, double x_max, double y_min, double y_max, int nx,
                       int ny) {
             Lattice out{x_min, x_max, y_min, y_max, nx, ny};
             out.validate();
             return out;
           }),
           py::arg("x_min"), py::arg("x_max"), py::arg("y_min"), py::arg("y_max"),
           py::arg("nx"), py::arg("ny"))
      .def_static("square", &Lattice::square, py::arg("half") = 1.5, py::arg("n") = 200,
                  "Square lattice over [-half, half]^2 with n points per side.")
      .def_readwrite("x_min", &Lattice::x_min)
      .def_readwrite("x_max", &Lattice::x_max)
      .def_readwrite("y_min", &Lattice::y_min)
      .def_readwrite("y_max", &Lattice::y_max)
      .def_readwrite("nx", &Lattice::nx)
      .def_readwrite("ny", &Lattice::ny)
      .def("hx", &Lattice::hx)
      .def("hy", &Lattice::hy)
      .def("cell_area", &Lattice::cell_area)
      .def("point", &Lattice::point, py::arg("ix"), py::arg("iy"))
      .def("contains", &Lattice::contains, py::arg("z"))
      .def("nearest_index", &Lattice::nearest_index, py::arg("z"))
      .def("validate", &Lattice::validate)
      .def("__repr__", [](const Lattice& l) {
        return "Lattice(" + std::to_string(l.nx) + "x" + std::to_string(l.ny) + ")";
      });

  py::class_<GridField>(m, "GridField",
                        "Real scalar field on a lattice; values and mask are "
                        "(ny, nx) arrays, mask != 0 marks meaningful cells.")
      .def_readonly("lattice", &GridField::lattice)
      .def_property_readonly("values", &field_values)
      .def_property_readonly("mask", &field_mask)
      .def("at", [](const GridField& f, int ix, int iy) { return f.at(ix, iy); },
           py::arg("ix"), py::arg("iy"))
      .def("valid", &GridField::valid, py::arg("ix"), py::arg("iy"))
      .def("__repr__", [](const GridField& f) {
        return "GridField(" + std::to_string(f.lattice.nx) + "x" +
               std::to_string(f.lattice.ny) + ")";
      });

  m.def("value_near", &value_near, py::arg("field"), py::arg("z"),
        "Field value at the lattice point nearest to z.");
  m.def("lattice_mass", &lattice_mass, py::arg("field"),
        "Sum of values times cell area over valid cells.");
  m.def("mass_fraction_near", &mass_fraction_near, py::arg("field"), py::arg("nodes"),
        py::arg("radius"),
        "Positive-part mass within radius of any node over total positive mass.");

  // ---- densities ----------------------------------------------------------
  m.def("h2_closed_form", &h2_closed_form, py::arg("s0"), py::arg("s1"), py::arg("sigma"),
        py::arg("z"),
        "Closed-form n=2 condensed density; pure noise reduces to "
        "1 / (pi (1+|z|^2)^2).");
  m.def("pure_noise_potential", &pure_noise_potential, py::arg("n"), py::arg("z"));
  m.def("pure_noise_density", &pure_noise_density, py::arg("n"), py::arg("z"),
        "Exact sigma-independent pure-noise limit of the analytic density.");
  m.def("expected_F", &expected_F, py::arg("measure"), py::arg("n"), py::arg("sigma"),
        py::arg("z"),
        "Noise expectation of (u1 - z u0)(u1 - z u0)^H as a complex matrix.");
  m.def("analytic_log_potential", &analytic_log_potential, py::arg("clean"),
        py::arg("sigma"), py::arg("z"),
        "Clipped log-determinant potential of the expected pencil covariance.");

  py::class_<McDensity>(m, "McDensity",
                        "Monte Carlo condensed density with pointwise "
                        "standard errors.")
      .def_readonly("density", &McDensity::density)
      .def_readonly("std_error", &McDensity::std_error)
      .def_readonly("potential", &McDensity::potential)
      .def_readonly("resampled", &McDensity::resampled)
      .def_readonly("trials", &McDensity::trials);

  m.def("mc_condensed_density", &mc_condensed_density, py::arg("measure"), py::arg("n"),
        py::arg("sigma"), py::arg("lattice"), py::arg("trials"), py::arg("spec"),
        "Trial-averaged log-determinant potential and its scaled discrete "
        "Laplacian over fresh noise draws.");
  m.def("analytic_density", &analytic_density, py::arg("measure"), py::arg("n"),
        py::arg("sigma"), py::arg("lattice"),
        "Deterministic condensed-density approximation from the expected "
        "pencil covariance.");

  // ---- pole transform -----------------------------------------------------
  py::class_<PseudosamplePool>(m, "PseudosamplePool",
                               "Pole/residue solutions of R independently "
                               "perturbed copies of one moment vector.")
      .def_readonly("R", &PseudosamplePool::R)
      .def_readonly("sigma_prime", &PseudosamplePool::sigma_prime)
      .def_readonly("solutions", &PseudosamplePool::solutions)
      .def_readonly("failed", &PseudosamplePool::failed);

  py::class_<PTransformResult>(m, "PTransformResult",
                               "Pseudosample-averaged log-potential and its "
                               "scaled Laplacian.")
      .def_readonly("grid", &PTransformResult::grid)
      .def_readonly("grid_modulus", &PTransformResult::grid_modulus)
      .def_readonly("pool", &PTransformResult::pool)
      .def_readonly("n", &PTransformResult::n)
      .def_readonly("sigma", &PTransformResult::sigma)
      .def_readonly("sigma_prime", &PTransformResult::sigma_prime)
      .def_readonly("seed", &PTransformResult::seed);

  m.def("make_pseudosamples", &make_pseudosamples, py::arg("data"), py::arg("R"),
        py::arg("sigma_prime"), py::arg("spec"),
        "Interpolates R perturbed copies data + noise(sigma_prime).");
  m.def("ptransform", &ptransform, py::arg("data"), py::arg("lattice"), py::arg("R"),
        py::arg("sigma_prime"), py::arg("spec"),
        "Full transform: pseudosample pool, averaged log-potential, and its "
        "(1/2pi) discrete Laplacian.");

  // ---- clustering and estimation -----------------------------------------
  py::class_<PoolMember>(m, "PoolMember",
                         "One pool pole with its residue and originating "
                         "pseudosample index (1-based).")
      .def_readonly("pole", &PoolMember::pole)
      .def_readonly("residue", &PoolMember::residue)
      .def_readonly("r", &PoolMember::r);

  py::class_<Cluster>(m, "Cluster", "Pool poles attracted by one candidate peak.")
      .def_readonly("candidate", &Cluster::candidate)
      .def_readonly("height", &Cluster::height)
      .def_readonly("members", &Cluster::members)
      .def_readonly("radius", &Cluster::radius)
      .def_readonly("cardinality_fraction", &Cluster::cardinality_fraction)
      .def("mean_pole", &Cluster::mean_pole)
      .def("mean_residue", &Cluster::mean_residue)
      .def("__len__", [](const Cluster& c) { return c.members.size(); });

  py::class_<EstimationResult>(m, "EstimationResult",
                               "Final parameter estimate extracted from a "
                               "transform field and its pool.")
      .def_readonly("p_hat", &EstimationResult::p_hat)
      .def_readonly("nodes_hat", &EstimationResult::nodes_hat)
      .def_readonly("weights_hat", &EstimationResult::weights_hat)
      .def_readonly("clusters", &EstimationResult::clusters)
      .def_readonly("n_candidates", &EstimationResult::n_candidates)
      .def_readonly("residual_amplitude", &EstimationResult::residual_amplitude)
      .def("__repr__", [](const EstimationResult& e) {
        return "EstimationResult(p_hat=" + std::to_string(e.p_hat) + ")";
      });

  m.def("local_maxima", &local_maxima, py::arg("field"), py::arg("min_height_fraction"),
        "Strict 8-neighbourhood local maxima at or above min_height_fraction "
        "of the global maximum, sorted by descending value.");
  m.def("estimate_params", &estimate_params, py::arg("transform"), py::arg("tau") = 0.5,
        py::arg("radius") = -1.0, py::arg("min_height_fraction") = 0.05,
        "Candidate peaks -> non-overlap pass -> exclusive pole clusters -> "
        "cardinality filter; radius <= 0 selects 5 lattice spacings.");

  // ---- experiment harness -------------------------------------------------
  py::class_<ExperimentConfig>(m, "ExperimentConfig",
                               "Settings for a full estimation experiment over "
                               "M independent data sets.")
      .def(py::init<>())
      .def_readwrite("measure", &ExperimentConfig::measure)
      .def_readwrite("n", &ExperimentConfig::n)
      .def_readwrite("sigma", &ExperimentConfig::sigma)
      .def_readwrite("M", &ExperimentConfig::M)
      .def_readwrite("R", &ExperimentConfig::R)
      .def_readwrite("sigma_prime", &ExperimentConfig::sigma_prime)
      .def_readwrite("lattice", &ExperimentConfig::lattice)
      .def_readwrite("tau", &ExperimentConfig::tau)
      .def_readwrite("radius", &ExperimentConfig::radius)
      .def_readwrite("min_height", &ExperimentConfig::min_height)
      .def_readwrite("seed", &ExperimentConfig::seed);

  m.def("benchmark_measure", &benchmark_measure,
        "Five-component benchmark measure with one sub-resolution node pair.");
  m.def("benchmark_config", &benchmark_config,
        "Standard benchmark run settings for that measure.");

  py::class_<ParamStats>(m, "ParamStats",
                         "Aggregate recovery statistics over the accepted "
                         "replications.")
      .def_readonly("requested", &ParamStats::requested)
      .def_readonly("accepted", &ParamStats::accepted)
      .def_readonly("discarded_few_candidates", &ParamStats::discarded_few_candidates)
      .def_readonly("discarded_low_p", &ParamStats::discarded_low_p)
      .def_readonly("discarded_duplicate_match", &ParamStats::discarded_duplicate_match)
      .def_readonly("discarded_failed_transform", &ParamStats::discarded_failed_transform)
      .def_readonly("acceptance_rate", &ParamStats::acceptance_rate)
      .def_readonly("p_bias", &ParamStats::p_bias)
      .def_readonly("p_sd", &ParamStats::p_sd)
      .def_readonly("p_mse", &ParamStats::p_mse)
      .def_readonly("xi_true", &ParamStats::xi_true)
      .def_readonly("xi_bias", &ParamStats::xi_bias)
      .def_readonly("xi_sd", &ParamStats::xi_sd)
      .def_readonly("xi_mse", &ParamStats::xi_mse)
      .def_readonly("c_true", &ParamStats::c_true)
      .def_readonly("c_bias", &ParamStats::c_bias)
      .def_readonly("c_sd", &ParamStats::c_sd)
      .def_readonly("c_mse", &ParamStats::c_mse)
      .def_readonly("recall_within_003", &ParamStats::recall_within_003)
      .def_readonly("a_res", &ParamStats::a_res)
      .def_readonly("a_res_count", &ParamStats::a_res_count);

  m.def("run_table1", &run_table1, py::arg("config"),
        py::call_guard<py::gil_scoped_release>(),
        "Transform + clustering pipeline on M noisy data sets with "
        "nearest-node matching and population bias / sd / MSE.");

  py::class_<ErrorComparison>(m, "ErrorComparison",
                              "Squared-error comparison between the plain "
                              "interpolation estimate and the pool average.")
      .def_readonly("e0", &ErrorComparison::e0)
      .def_readonly("eR", &ErrorComparison::eR)
      .def_readonly("failed", &ErrorComparison::failed)
      .def_readonly("fraction_eR_smaller", &ErrorComparison::fraction_eR_smaller)
      .def_readonly("mean_e0", &ErrorComparison::mean_e0)
      .def_readonly("mean_eR", &ErrorComparison::mean_eR)
      .def_readonly("sd_e0", &ErrorComparison::sd_e0)
      .def_readonly("sd_eR", &ErrorComparison::sd_eR);

  m.def("run_error_comparison", &run_error_comparison, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<SupportRadius>(m, "SupportRadius",
                            "Data-free support radius of one node's density peak.")
      .def_readonly("found", &SupportRadius::found)
      .def_readonly("radius", &SupportRadius::radius);

  m.def("support_radii", &support_radii, py::arg("measure"), py::arg("n"),
        py::arg("sigma"), py::arg("lattice"),
        "Interquartile widths of the analytic-density peaks per node.");
}
