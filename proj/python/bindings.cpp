#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qpc/qpc.hpp"

namespace py = pybind11;
using namespace qpc;
using nlohmann::json;

namespace {

py::object to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null: return py::none();
    case json::value_t::boolean: return py::bool_(j.get<bool>());
    case json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case json::value_t::number_float: return py::float_(j.get<double>());
    case json::value_t::string: return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list l;
      for (const auto& v : j) l.append(to_py(v));
      return std::move(l);
    }
    default: {
      py::dict d;
      for (const auto& [k, v] : j.items()) d[py::str(k)] = to_py(v);
      return std::move(d);
    }
  }
}

json from_py(const py::handle& obj) {
  const std::string s = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  try {
    return json::parse(s);
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, e.what());
  }
}

template <class T>
T parse_as(const py::handle& obj) {
  try {
    return from_py(obj).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, e.what());
  }
}

EstimatorConfig estimator(int n, int samples, std::uint64_t seed, int threads) {
  EstimatorConfig c;
  c.n = n;
  c.samples = samples;
  c.seed = seed;
  c.threads = threads;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lyapunov exponents and annulus measurements for analytic quasi-periodic cocycles";

  static py::exception<Error> exc(m, "QpcError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = exc;
      py::object inst = err(std::string(to_string(e.kind())), std::string(e.what()));
      PyErr_SetObject(exc.ptr(), inst.ptr());
    }
  });

  py::class_<LaurentScalar>(m, "LaurentScalar")
      .def(py::init<int, std::vector<Complex>>(), py::arg("lowest_degree"), py::arg("coefficients"))
      .def_static("constant", &LaurentScalar::constant)
      .def_static("cosine", &LaurentScalar::cosine, py::arg("amplitude") = 1.0, py::arg("phase") = 0.0)
      .def_static("sine", &LaurentScalar::sine, py::arg("amplitude") = 1.0, py::arg("phase") = 0.0)
      .def_static("from_json", [](const py::object& o) { return parse_as<LaurentScalar>(o); })
      .def("__call__", [](const LaurentScalar& f, Complex z) { return f(z); })
      .def_property_readonly("lowest_degree", &LaurentScalar::lowest_degree)
      .def_property_readonly("highest_degree", &LaurentScalar::highest_degree)
      .def("to_json", [](const LaurentScalar& f) { return to_py(json(f)); });

  py::class_<LaurentMatrixFunction>(m, "LaurentMatrixFunction")
      .def_static("from_json", [](const py::object& o) { return parse_as<LaurentMatrixFunction>(o); })
      .def_static("constant", &LaurentMatrixFunction::constant, py::arg("matrix"), py::arg("rho") = 0.5)
      .def("__call__", [](const LaurentMatrixFunction& f, Complex z) { return f(z); })
      .def_property_readonly("rows", &LaurentMatrixFunction::rows)
      .def_property_readonly("cols", &LaurentMatrixFunction::cols)
      .def("det", &LaurentMatrixFunction::det)
      .def("to_json", [](const LaurentMatrixFunction& f) { return to_py(json(f)); });

  py::class_<Rotation>(m, "Rotation")
      .def(py::init<double>())
      .def_static("golden", &Rotation::golden)
      .def_property_readonly("omega", &Rotation::omega);

  py::class_<BlockCocycle>(m, "BlockCocycle")
      .def("__call__", [](const BlockCocycle& c, Complex z) { return c(z); })
      .def_property_readonly("m", &BlockCocycle::m)
      .def_property_readonly("d", &BlockCocycle::d)
      .def_property_readonly("kind", [](const BlockCocycle& c) { return std::string(to_string(c.kind())); });

  py::class_<ModelConfig>(m, "ModelConfig")
      .def_static("from_json", [](const py::object& o) { return parse_model_config(from_py(o)); })
      .def_static("load", &load_model_config)
      .def_property_readonly("kind", [](const ModelConfig& c) { return std::string(to_string(c.kind)); })
      .def_readonly("lambda_", &ModelConfig::lambda)
      .def_readonly("E", &ModelConfig::E)
      .def_readonly("rho", &ModelConfig::rho)
      .def_readonly("E_sweep", &ModelConfig::E_sweep)
      .def_readonly("lambda_sweep", &ModelConfig::lambda_sweep)
      .def("build", [](const ModelConfig& c) { return build_model(c); })
      .def("build_at", [](const ModelConfig& c, double lambda, double E) { return build_model(c, lambda, E); },
           py::arg("lam"), py::arg("E"));

  m.def("build_schrodinger_1d", &build_schrodinger_1d, py::arg("v"), py::arg("lam"), py::arg("E"),
        py::arg("rot") = Rotation::golden());
  m.def("build_constant", &build_constant, py::arg("A"), py::arg("d") = 1, py::arg("rot") = Rotation::golden());
  m.def("build_scalar", &build_scalar, py::arg("g"), py::arg("rot") = Rotation::golden());
  m.def("build_general", &build_general, py::arg("A"), py::arg("d"), py::arg("rot") = Rotation::golden());
  m.def("build_band_jacobi", &build_band_jacobi, py::arg("W"), py::arg("R"), py::arg("D"), py::arg("lam"),
        py::arg("E"), py::arg("rot") = Rotation::golden());
  m.def("realified", &realified);

  m.def(
      "spectrum_qr",
      [](const BlockCocycle& c, int n, int samples, std::uint64_t seed, int threads) {
        return to_py(json(spectrum_qr(c, estimator(n, samples, seed, threads))));
      },
      py::arg("cocycle"), py::arg("n") = 10000, py::arg("samples") = 8, py::arg("seed") = 1, py::arg("threads") = 1);
  m.def(
      "topk_sum",
      [](const BlockCocycle& c, int k, int n, int samples, std::uint64_t seed) {
        const auto t = topk_sum_via_exterior(c, k, estimator(n, samples, seed, 1));
        return py::make_tuple(t.value, t.spread);
      },
      py::arg("cocycle"), py::arg("k"), py::arg("n") = 10000, py::arg("samples") = 8, py::arg("seed") = 1);
  m.def(
      "scalar_log_mean",
      [](const LaurentScalar& g, double r) {
        const auto s = scalar_log_mean(g, r);
        return py::dict(py::arg("value") = s.value, py::arg("quadrature") = s.quadrature,
                        py::arg("discrepancy") = s.discrepancy);
      },
      py::arg("g"), py::arg("radius") = 1.0);

  m.def("count_zeros_by_argument_principle", &count_zeros_by_argument_principle);
  m.def("measure_N_beta",
        [](const LaurentScalar& f, double rho, double R) { return to_py(json(measure_N_beta(f, rho, R))); });
  m.def("find_good_circle", [](const LaurentScalar& f, double inner, double width, double rho) {
    return to_py(json(find_good_circle(f, inner, width, rho)));
  });
  m.def("epsilon0", &epsilon0);
  m.def("certified_outer_radius", &certified_outer_radius);
  m.def("default_delta", &default_delta);
  m.def("threshold_bounded_E", [](int N1, int N2, double beta1, double beta2, double B, int d, double rho,
                                  double delta) {
    return to_py(json(threshold_bounded_E({N1, N2, beta1, beta2}, B, d, rho, delta)));
  });

  m.def(
      "growth_instance",
      [](std::uint64_t seed, double lambda, double B, int n, int d, int m, int k) {
        std::mt19937_64 gen(seed);
        return to_py(json(verify_growth(random_growth_hypothesis(gen, lambda, B, n, d, m), k)));
      },
      py::arg("seed"), py::arg("lam"), py::arg("B"), py::arg("n"), py::arg("d"), py::arg("m"), py::arg("k"));
  m.def(
      "circle_convexity_check",
      [](const BlockCocycle& c, int k, int n, double r1, double r, double r2, int angles) {
        const auto x = circle_convexity_check(c, k, n, r1, r, r2, angles);
        return py::dict(py::arg("alpha") = x.alpha, py::arg("m1") = x.m1, py::arg("m") = x.m, py::arg("m2") = x.m2,
                        py::arg("residual") = x.residual);
      },
      py::arg("cocycle"), py::arg("k"), py::arg("n"), py::arg("r1"), py::arg("r"), py::arg("r2"),
      py::arg("angles") = 512);

  m.def("elementary_symmetric", &elementary_symmetric);
  m.def(
      "has_no_constant_eigenvalues",
      [](const LaurentMatrixFunction& V, int scan) { return to_py(json(has_no_constant_eigenvalues(V, scan))); },
      py::arg("V"), py::arg("scan") = 64);
}
