#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tilthall/algebra.hpp"
#include "tilthall/suites.hpp"

namespace py = pybind11;
using namespace tilthall;

namespace {

// JSON crosses the boundary as text; the package decodes it.
std::string run_json(const std::vector<std::string>& algebras, const std::string& tilting, const std::string& suite,
                     int dim_bound, int syzygy_bound, std::uint64_t seed, const std::string& cache_dir) {
    RunConfig c;
    c.algebras = algebras;
    c.tilting = tilting;
    c.suite = suite;
    c.dim_bound = dim_bound;
    c.syzygy_bound = syzygy_bound;
    c.seed = seed;
    c.cache_dir = cache_dir;
    RunResult r;
    {
        py::gil_scoped_release release;
        r = run(c);
    }
    return r.document.dump();
}

py::dict algebra_info(const std::string& path) {
    AlgebraPtr a = load_algebra(path);
    py::dict d;
    d["dim"] = a->dim;
    d["q"] = a->field.q();
    d["vertices"] = a->num_vertices();
    d["hash"] = a->hash;
    d["quiver"] = a->quiver;
    return d;
}

}  // namespace

PYBIND11_MODULE(_tilthall, m) {
    m.doc() = "Hall algebras, Gorenstein-projective modules and tilting dualities over finite fields";
    m.attr("__version__") = kToolVersion;
    py::register_exception<Error>(m, "TilthallError", PyExc_RuntimeError);
    m.def("suite_names", &suite_names);
    m.def("algebra_info", &algebra_info, py::arg("path"));
    m.def("run_json", &run_json, py::arg("algebras"), py::arg("tilting") = "", py::arg("suite") = "all",
          py::arg("dim_bound") = 4, py::arg("syzygy_bound") = 24, py::arg("seed") = 0x5eed,
          py::arg("cache_dir") = "");
}
