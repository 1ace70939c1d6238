#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ermc/cases.hpp"
#include "ermc/io.hpp"
#include "ermc/oracles.hpp"
#include "ermc/solver.hpp"
#include "ermc/spectral.hpp"

namespace py = pybind11;
using namespace ermc;

PYBIND11_MODULE(_ermc, m) {
  m.doc() = "Emission-based reciprocal Monte Carlo radiation solver";

  py::class_<NarrowBand>(m, "NarrowBand")
      .def(py::init<>())
      .def_readwrite("nu_lo", &NarrowBand::nu_lo)
      .def_readwrite("nu_hi", &NarrowBand::nu_hi)
      .def_readwrite("nu_center", &NarrowBand::nu_center)
      .def("delta_nu", &NarrowBand::delta_nu);

  py::class_<QuadratureSet>(m, "QuadratureSet")
      .def(py::init<>())
      .def_readwrite("g_points", &QuadratureSet::g_points)
      .def_readwrite("weights", &QuadratureSet::weights)
      .def_static("gauss_legendre", &QuadratureSet::gauss_legendre)
      .def_static("single_point", &QuadratureSet::single_point);

  py::class_<LineSpectrum>(m, "LineSpectrum")
      .def(py::init<>())
      .def_readwrite("nu_grid", &LineSpectrum::nu_grid)
      .def_readwrite("temps", &LineSpectrum::temps)
      .def_readwrite("kappa", &LineSpectrum::kappa);

  py::class_<SpectralModel>(m, "SpectralModel")
      .def("n_bands", &SpectralModel::n_bands)
      .def("n_quad", &SpectralModel::n_quad)
      .def("n_temps", &SpectralModel::n_temps)
      .def("interp_k", &SpectralModel::interp_k)
      .def("interp_ib", &SpectralModel::interp_ib)
      .def("planck_mean", &SpectralModel::planck_mean);

  py::class_<CartesianGrid>(m, "CartesianGrid")
      .def(py::init<>())
      .def_readwrite("nx", &CartesianGrid::nx)
      .def_readwrite("ny", &CartesianGrid::ny)
      .def_readwrite("nz", &CartesianGrid::nz)
      .def_readwrite("dx", &CartesianGrid::dx)
      .def_readwrite("dy", &CartesianGrid::dy)
      .def_readwrite("dz", &CartesianGrid::dz)
      .def_readwrite("origin", &CartesianGrid::origin)
      .def("cell_count", &CartesianGrid::cell_count)
      .def("cell_center", &CartesianGrid::cell_center);

  py::class_<Wall>(m, "Wall")
      .def(py::init<>())
      .def(py::init([](double t, double e) {
             return Wall{t, e};
           }),
           py::arg("temperature"), py::arg("emissivity") = 1.0)
      .def_readwrite("temperature", &Wall::temperature)
      .def_readwrite("emissivity", &Wall::emissivity);

  py::enum_<AxisKind>(m, "AxisKind")
      .value("periodic", AxisKind::periodic)
      .value("wall", AxisKind::wall);

  py::class_<BoundarySpec>(m, "BoundarySpec")
      .def(py::init<>())
      .def_readwrite("kind", &BoundarySpec::kind)
      .def_readwrite("lo", &BoundarySpec::lo)
      .def_readwrite("hi", &BoundarySpec::hi);

  py::class_<TemperatureField>(m, "TemperatureField")
      .def(py::init<>())
      .def_readwrite("grid", &TemperatureField::grid)
      .def_readwrite("values", &TemperatureField::values)
      .def("max_value", &TemperatureField::max_value)
      .def("min_value", &TemperatureField::min_value);

  py::class_<SolveConfig>(m, "SolveConfig")
      .def(py::init<>())
      .def_readwrite("rays_per_cell", &SolveConfig::rays_per_cell)
      .def_readwrite("tolerance", &SolveConfig::tolerance)
      .def_readwrite("seed", &SolveConfig::seed)
      .def_readwrite("sorting", &SolveConfig::sorting)
      .def_readwrite("n_levels", &SolveConfig::n_levels)
      .def_readwrite("steps_per_level", &SolveConfig::steps_per_level)
      .def_readwrite("coarsen_ratio", &SolveConfig::coarsen_ratio)
      .def_readwrite("max_steps", &SolveConfig::max_steps)
      .def_readwrite("volume_sampling", &SolveConfig::volume_sampling)
      .def_readwrite("specular_walls", &SolveConfig::specular_walls)
      .def_readwrite("workers", &SolveConfig::workers);

  py::class_<SolutionField>(m, "SolutionField")
      .def_readonly("grid", &SolutionField::grid)
      .def_readonly("q_r", &SolutionField::q_r)
      .def_readonly("std_dev", &SolutionField::std_dev)
      .def_readonly("steps_per_level", &SolutionField::steps_per_level)
      .def_readonly("total_steps", &SolutionField::total_steps)
      .def_readonly("wall_time", &SolutionField::wall_time);

  py::class_<SlabCase>(m, "SlabCase")
      .def(py::init<>())
      .def_readwrite("length", &SlabCase::length)
      .def_readwrite("t_profile", &SlabCase::t_profile)
      .def_readwrite("kappa", &SlabCase::kappa)
      .def_readwrite("wall_lo", &SlabCase::wall_lo)
      .def_readwrite("wall_hi", &SlabCase::wall_hi);

  py::class_<BoxCase>(m, "BoxCase")
      .def(py::init<>())
      .def_readwrite("t_profile", &BoxCase::t_profile)
      .def_readwrite("kappa", &BoxCase::kappa)
      .def_readwrite("wall_temperature", &BoxCase::wall_temperature);

  py::class_<VerifyCase>(m, "VerifyCase")
      .def_readonly("name", &VerifyCase::name)
      .def_readonly("description", &VerifyCase::description)
      .def_readonly("grid", &VerifyCase::grid)
      .def_readonly("field", &VerifyCase::field)
      .def_readonly("boundary", &VerifyCase::boundary)
      .def_readonly("model", &VerifyCase::model)
      .def_readonly("peak_tol", &VerifyCase::peak_tol)
      .def_readonly("sigma_mult", &VerifyCase::sigma_mult)
      .def_readonly("is_3d", &VerifyCase::is_3d);

  m.def("planck_intensity", &planck_intensity, py::arg("nu"),
        py::arg("temperature"));
  m.def("make_bands", &make_bands);
  m.def("make_planck_bands", &make_planck_bands);
  m.def("make_temp_grid", &make_temp_grid);
  m.def("grey_model", &grey_model, py::arg("kappa"), py::arg("bands"),
        py::arg("temp_grid"),
        py::arg("quadrature") = QuadratureSet::single_point());
  m.def("build_k_distribution", &build_k_distribution);
  m.def(
      "elsasser_spectrum",
      [](const std::vector<double>& temps) {
        return elsasser_spectrum(ElsasserParams{}, temps);
      },
      py::arg("temps"));
  m.def("solve", &solve, py::arg("grid"), py::arg("field"),
        py::arg("boundary"), py::arg("model"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("expint_e1", &expint_e1);
  m.def("expint_e2", &expint_e2);
  m.def("expint_e3", &expint_e3);
  m.def("slab_oracle", &slab_oracle, py::arg("slab"), py::arg("x_points"),
        py::arg("refine") = 1);
  m.def("box_oracle", &box_oracle, py::arg("box"), py::arg("points"),
        py::arg("refine") = 1);
  m.def("lbl_reference", &lbl_reference, py::arg("grid"), py::arg("field"),
        py::arg("boundary"), py::arg("spectrum"), py::arg("config"),
        py::arg("memory_cap_bytes") = std::size_t(2) << 30,
        py::call_guard<py::gil_scoped_release>());
  m.def("case_names", &case_names);
  m.def("make_case", &make_case, py::arg("name"), py::arg("grid_n") = 0);
  m.def("write_ktab", &write_ktab);
  m.def("read_ktab", &read_ktab);
  m.def("write_tfld", &write_tfld);
  m.def("read_tfld", &read_tfld);
  m.def("write_qrf", &write_qrf);
  m.def("read_qrf", &read_qrf);
  m.def("file_hash", &file_hash);
}
