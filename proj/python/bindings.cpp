#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cst/error.hpp"
#include "cst/harmonics.hpp"
#include "cst/io.hpp"
#include "cst/kernel.hpp"
#include "cst/legendre.hpp"
#include "cst/phantom.hpp"
#include "cst/projector.hpp"
#include "cst/reconstruct.hpp"
#include "cst/system.hpp"

namespace py = pybind11;
using namespace cst;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::array<double, 3> to_array(Vec3 v) { return {v.x, v.y, v.z}; }
Vec3 to_vec(std::array<double, 3> a) { return {a[0], a[1], a[2]}; }

Array volume_array(const Volume& v) {
    const auto& d = v.dims();
    Array out({d[2], d[1], d[0]});
    std::copy(v.values().begin(), v.values().end(), out.mutable_data());
    return out;
}

Volume volume_from_array(Array values, std::array<double, 3> origin, std::array<double, 3> spacing) {
    if (values.ndim() != 3) throw ShapeError("volume array must be 3-D (z, y, x)");
    VolumeGeometry g;
    g.dims = {static_cast<int>(values.shape(2)), static_cast<int>(values.shape(1)), static_cast<int>(values.shape(0))};
    g.origin = to_vec(origin);
    g.spacing = to_vec(spacing);
    Volume v(g);
    std::copy(values.data(), values.data() + values.size(), v.values().begin());
    return v;
}

Array data_array(const DataTensor& d) {
    Array out({d.n_p(), d.n_alpha(), d.n_beta()});
    std::copy(d.values().begin(), d.values().end(), out.mutable_data());
    return out;
}

py::array_t<cplx> complex_array(const std::vector<cplx>& values) {
    py::array_t<cplx> out(values.size());
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

}  // namespace

PYBIND11_MODULE(cstomo, m) {
    m.doc() = "Compton scattering tomography on toric surfaces";
    m.attr("__version__") = CST_VERSION;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::enum_<ThetaSampling>(m, "ThetaSampling")
        .value("gauss_legendre", ThetaSampling::gauss_legendre)
        .value("uniform", ThetaSampling::uniform);

    py::class_<ScanConfig>(m, "ScanConfig")
        .def(py::init<>())
        .def_readwrite("R", &ScanConfig::R)
        .def_readwrite("r_m", &ScanConfig::r_m)
        .def_readwrite("r_M", &ScanConfig::r_M)
        .def_readwrite("r_M_star", &ScanConfig::r_M_star)
        .def_readwrite("N", &ScanConfig::N)
        .def_readwrite("N_alpha", &ScanConfig::N_alpha)
        .def_readwrite("N_beta", &ScanConfig::N_beta)
        .def_readwrite("N_p", &ScanConfig::N_p)
        .def_readwrite("N_r", &ScanConfig::N_r)
        .def_readwrite("N_gamma", &ScanConfig::N_gamma)
        .def_readwrite("N_psi", &ScanConfig::N_psi)
        .def_readwrite("lambda_", &ScanConfig::lambda)
        .def_readwrite("seed", &ScanConfig::seed)
        .def_readwrite("theta_sampling", &ScanConfig::theta_sampling)
        .def("validate", &ScanConfig::validate);

    py::class_<VolumeGeometry>(m, "VolumeGeometry")
        .def(py::init<>())
        .def_readwrite("dims", &VolumeGeometry::dims)
        .def_property(
            "origin", [](const VolumeGeometry& g) { return to_array(g.origin); },
            [](VolumeGeometry& g, std::array<double, 3> a) { g.origin = to_vec(a); })
        .def_property(
            "spacing", [](const VolumeGeometry& g) { return to_array(g.spacing); },
            [](VolumeGeometry& g, std::array<double, 3> a) { g.spacing = to_vec(a); });

    py::class_<Volume>(m, "Volume")
        .def(py::init<VolumeGeometry>())
        .def_static("from_array", &volume_from_array, py::arg("values"), py::arg("origin"), py::arg("spacing"))
        .def_property_readonly("geometry", &Volume::geometry)
        .def("array", &volume_array, "Copy of the voxel values indexed [z, y, x]");

    py::class_<DataTensor>(m, "DataTensor")
        .def_property_readonly("p", &DataTensor::p)
        .def_property_readonly("alpha", &DataTensor::alpha)
        .def_property_readonly("beta", &DataTensor::beta)
        .def("array", &data_array, "Copy of the data indexed [p, alpha, beta]");

    py::class_<Ball>(m, "Ball")
        .def(py::init([](std::array<double, 3> c, double radius, double intensity) {
                 return Ball{to_vec(c), radius, intensity};
             }),
             py::arg("center"), py::arg("radius"), py::arg("intensity"))
        .def_property_readonly("center", [](const Ball& b) { return to_array(b.center); })
        .def_readwrite("radius", &Ball::radius)
        .def_readwrite("intensity", &Ball::intensity);

    py::class_<PhantomSpec>(m, "PhantomSpec")
        .def(py::init<>())
        .def_readwrite("balls", &PhantomSpec::balls)
        .def_readwrite("geometry", &PhantomSpec::geometry)
        .def_property_readonly("has_crack", [](const PhantomSpec& s) { return s.crack.has_value(); });

    py::class_<KernelMatrixSet>(m, "KernelMatrixSet")
        .def_readonly("R", &KernelMatrixSet::R)
        .def_readonly("r_M_star", &KernelMatrixSet::r_M_star)
        .def_readonly("M", &KernelMatrixSet::M)
        .def_readonly("r", &KernelMatrixSet::r)
        .def_readonly("p", &KernelMatrixSet::p)
        .def_readonly("A", &KernelMatrixSet::A);

    py::class_<SphereGrid>(m, "SphereGrid")
        .def(py::init<int, int, ThetaSampling>(), py::arg("N"), py::arg("n_theta"),
             py::arg("sampling") = ThetaSampling::gauss_legendre)
        .def_property_readonly("order", &SphereGrid::order)
        .def_property_readonly("n_theta", &SphereGrid::n_theta)
        .def_property_readonly("n_phi", &SphereGrid::n_phi)
        .def_property_readonly("thetas", &SphereGrid::thetas)
        .def(
            "forward",
            [](const SphereGrid& g, Array samples) {
                return complex_array(g.forward(std::span<const double>(samples.data(), samples.size())));
            },
            "Samples (layout [phi][theta]) -> packed coefficients")
        .def("inverse_real", [](const SphereGrid& g, py::array_t<cplx, py::array::forcecast> c) {
            const auto values = g.inverse_real(std::span<const cplx>(c.data(), c.size()));
            Array out(values.size());
            std::copy(values.begin(), values.end(), out.mutable_data());
            return out;
        });

    m.def("packed_index", &packed_index, py::arg("l"), py::arg("m"));
    m.def("legendre", &legendre, py::arg("l"), py::arg("x"));
    m.def("assoc_legendre", &assoc_legendre, py::arg("l"), py::arg("m"), py::arg("x"));
    m.def("qlm", &qlm, py::arg("l"), py::arg("m"));
    m.def(
        "ylm", [](int l, int mm, double gamma, double psi) { return ylm({l, mm}, gamma, psi); }, py::arg("l"),
        py::arg("m"), py::arg("gamma"), py::arg("psi"));

    m.def(
        "kernel_direct", [](double p, double r, int l, double R) { return kernel_direct({p, r, l}, R); },
        py::arg("p"), py::arg("r"), py::arg("l"), py::arg("R"));
    m.def(
        "kernel_expanded", [](double p, double r, int l, double R) { return kernel_expanded({p, r, l}, R); },
        py::arg("p"), py::arg("r"), py::arg("l"), py::arg("R"));
    m.def("kernel_diagonal", &kernel_diagonal, py::arg("r"), py::arg("l"), py::arg("R"));
    m.def("diagonal_roots", &diagonal_roots, py::arg("l"), py::arg("R"), py::arg("r_m"), py::arg("r_M"));
    m.def("gradient_ratio", &gradient_ratio, py::arg("r0"), py::arg("l"), py::arg("R"));

    m.def("default_phantom", &default_phantom, py::arg("n"), py::arg("R"));
    m.def("make_phantom", &make_phantom, py::arg("spec"));
    m.def(
        "project", [](const Volume& v, const ScanConfig& c) { return project(v, c); }, py::arg("volume"),
        py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def(
        "coeff_forward_1d",
        [](const std::function<double(double)>& f, int l, std::vector<double> p, double R, int panels) {
            return coeff_forward_1d(f, l, std::span<const double>(p), R, panels);
        },
        py::arg("f_lm"), py::arg("l"), py::arg("p"), py::arg("R"), py::arg("panels") = 256);
    m.def(
        "add_noise",
        [](const DataTensor& d, double snr_db, std::uint64_t seed) {
            NoisyData n = add_noise(d, {snr_db, seed});
            return py::make_tuple(std::move(n.data), n.epsilon_percent);
        },
        py::arg("data"), py::arg("snr_db"), py::arg("seed") = 1);
    m.def("nmse", &nmse, py::arg("f"), py::arg("f_tilde"));
    m.def("nmae", &nmae, py::arg("f"), py::arg("f_tilde"));

    m.def(
        "assemble_all", [](const ScanConfig& c) { return assemble_all(c); }, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
    m.def("tikhonov_solve", &tikhonov_solve, py::arg("A"), py::arg("g"), py::arg("lambda_"));
    m.def(
        "reconstruct",
        [](const DataTensor& d, const KernelMatrixSet& s, const ScanConfig& c, const VolumeGeometry& target) {
            return reconstruct(d, s, c, target).volume;
        },
        py::arg("data"), py::arg("matrices"), py::arg("config"), py::arg("target"),
        py::call_guard<py::gil_scoped_release>());

    m.def("read_volume", &read_volume, py::arg("path"));
    m.def("write_volume", &write_volume, py::arg("path"), py::arg("volume"));
    m.def("read_data", &read_data, py::arg("path"));
    m.def("write_data", &write_data, py::arg("path"), py::arg("data"));
    m.def(
        "load_scan_config", [](const std::filesystem::path& path) { return load_config(path).scan; },
        py::arg("path"));
}
