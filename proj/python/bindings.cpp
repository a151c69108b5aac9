#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <tuple>

#include "htype/classifier.hpp"
#include "htype/constructions.hpp"
#include "htype/io.hpp"
#include "htype/j_calculus.hpp"

namespace py = pybind11;
using namespace htype;

namespace {

using ConstantTuple = std::tuple<int, int, int, double>;

StructuredAlgebra structured(const MetricLieAlgebra& a, const std::optional<Matrix>& complex) {
  StructuredAlgebra out{a, std::nullopt};
  if (complex) out.complex = ComplexStructure{*complex};
  return out;
}

std::optional<Matrix> complex_matrix(const StructuredAlgebra& s) {
  if (!s.complex) return std::nullopt;
  return s.complex->matrix;
}

py::dict verdict_dict(const HTypeVerdict& v) {
  py::dict d;
  d["status"] = std::string(to_string(v.status));
  d["bracket_containment_defect"] = v.bracket_containment_defect;
  d["polarized_isometry_defect"] = v.polarized_isometry_defect;
  d["center_dim"] = v.center_dim;
  d["complement_dim"] = v.complement_dim;
  d["tolerance_used"] = v.tolerance_used;
  if (v.isometry_witness) d["isometry_witness"] = v.isometry_witness->z;
  if (v.containment_witness) {
    d["containment_witness"] = py::make_tuple(v.containment_witness->u, v.containment_witness->v);
  }
  return d;
}

py::dict residual_dict(const IsomorphismResiduals& r) {
  py::dict d;
  d["bracket"] = r.bracket;
  d["metric"] = r.metric;
  d["complex_structure"] = r.complex_structure;
  return d;
}

}  // namespace

PYBIND11_MODULE(_htype, m) {
  m.doc() = "H-type metric Lie algebras: construction, verification and classification";

  py::register_exception<Error>(m, "HTypeError", PyExc_ValueError);

  m.attr("DEFAULT_TOLERANCE") = kDefaultTolerance;
  m.attr("DERIVED_TOLERANCE") = kDerivedTolerance;

  py::class_<MetricLieAlgebra>(m, "MetricLieAlgebra")
      .def(py::init([](int dim, const std::vector<ConstantTuple>& constants, const Matrix& gram) {
             std::vector<StructureConstant> sc;
             for (const auto& [i, j, k, c] : constants) sc.push_back({i, j, k, c});
             return MetricLieAlgebra(dim, std::move(sc), gram);
           }),
           py::arg("dim"), py::arg("structure_constants"), py::arg("gram"))
      .def_property_readonly("dim", &MetricLieAlgebra::dim)
      .def_property_readonly("gram", &MetricLieAlgebra::gram)
      .def_property_readonly("structure_constants",
                             [](const MetricLieAlgebra& a) {
                               std::vector<ConstantTuple> out;
                               for (const auto& e : a.structure_constants()) out.emplace_back(e.i, e.j, e.k, e.c);
                               return out;
                             })
      .def("bracket", &MetricLieAlgebra::bracket, py::arg("x"), py::arg("y"))
      .def("inner", &MetricLieAlgebra::inner)
      .def("__repr__", [](const MetricLieAlgebra& a) {
        return "<MetricLieAlgebra dim=" + std::to_string(a.dim()) + " constants=" +
               std::to_string(a.structure_constants().size()) + ">";
      });

  m.def("heisenberg_complex", [](int n) {
    auto s = heisenberg_complex(n);
    return py::make_tuple(s.algebra, s.complex->matrix);
  }, py::arg("n"), "Complex Heisenberg algebra in real form, with its complex structure matrix.");
  m.def("heisenberg_real", &heisenberg_real, py::arg("n"));
  m.def("clifford_algebra", [](int center_dim, int module_dim) {
    return from_clifford_representation(standard_clifford_generators(center_dim, module_dim));
  }, py::arg("center_dim"), py::arg("module_dim"), "H-type algebra from the built-in Clifford generators.");
  m.def("from_clifford_representation", [](const std::vector<Matrix>& generators, double tol) {
    if (generators.empty()) throw InputError("need at least one generator");
    CliffordGenerators g{static_cast<int>(generators.size()), static_cast<int>(generators.front().rows()), generators};
    return from_clifford_representation(g, std::nullopt, std::nullopt, tol);
  }, py::arg("generators"), py::arg("tol") = kDefaultTolerance);
  m.def("direct_sum", [](const MetricLieAlgebra& a, const std::optional<Matrix>& ca, const MetricLieAlgebra& b,
                         const std::optional<Matrix>& cb) {
    auto s = direct_sum(structured(a, ca), structured(b, cb));
    return py::make_tuple(s.algebra, complex_matrix(s));
  }, py::arg("a"), py::arg("complex_a"), py::arg("b"), py::arg("complex_b"));
  m.def("scramble", [](const MetricLieAlgebra& a, const std::optional<Matrix>& c, std::uint64_t seed) {
    auto s = scramble(structured(a, c), seed);
    return py::make_tuple(s.value.algebra, complex_matrix(s.value), s.transform);
  }, py::arg("algebra"), py::arg("complex") = py::none(), py::arg("seed") = 0);

  m.def("validate_algebra", [](const MetricLieAlgebra& a, double tol) {
    py::dict d;
    for (const auto& defect : validate_algebra(a, tol)) d[py::str(defect.name)] = defect.magnitude;
    return d;
  }, py::arg("algebra"), py::arg("tol") = kDefaultTolerance);
  m.def("center", [](const MetricLieAlgebra& a, double tol) { return center(a, tol).basis; },
        py::arg("algebra"), py::arg("tol") = kDefaultTolerance);
  m.def("nilpotency_step", &nilpotency_step, py::arg("algebra"), py::arg("tol") = kDefaultTolerance);

  m.def("compute_j", [](const MetricLieAlgebra& a, const Vector& z, double tol) { return compute_j(a, z, tol).matrix; },
        py::arg("algebra"), py::arg("z"), py::arg("tol") = kDefaultTolerance);
  m.def("j_bilinear_form", &j_bilinear_form, py::arg("algebra"), py::arg("z"), py::arg("tol") = kDefaultTolerance);
  m.def("clifford_defect", &clifford_defect, py::arg("algebra"), py::arg("z"), py::arg("w"),
        py::arg("tol") = kDefaultTolerance);
  m.def("isometry_defect", &isometry_defect, py::arg("algebra"), py::arg("z"), py::arg("tol") = kDefaultTolerance);
  m.def("polarized_isometry_defect", &polarized_isometry_defect, py::arg("algebra"),
        py::arg("tol") = kDefaultTolerance);

  m.def("verify_h_type", [](const MetricLieAlgebra& a, double tol) { return verdict_dict(verify_h_type(a, tol)); },
        py::arg("algebra"), py::arg("tol") = kDefaultTolerance);
  m.def("classify", [](const MetricLieAlgebra& a, const std::optional<Matrix>& c, double tol, const std::string& pivot) {
    std::optional<ComplexStructure> cs;
    if (c) cs = ComplexStructure{*c};
    const Classification result = classify(a, cs, tol, parse_pivot_rule(pivot));
    py::dict d;
    d["kind"] = std::string(to_string(result.kind()));
    d["verdict"] = verdict_dict(result.verdict);
    d["diagnostic"] = result.diagnostic;
    if (result.result) {
      d["n"] = result.result->n;
      d["iso_matrix"] = result.result->iso_matrix;
      d["standard_basis"] = result.result->standard_basis;
      d["residuals"] = residual_dict(result.result->residuals);
    }
    if (result.obstruction) {
      d["obstruction"] = py::dict(py::arg("z") = result.obstruction->z, py::arg("w") = result.obstruction->w,
                                  py::arg("product_norm") = result.obstruction->product_norm,
                                  py::arg("kind") = std::string(to_string(result.obstruction->kind)));
    }
    return d;
  }, py::arg("algebra"), py::arg("complex") = py::none(), py::arg("tol") = kDefaultTolerance,
     py::arg("pivot") = std::string(to_string(PivotRule::largest_projection)));
  m.def("verify_isomorphism", [](const MetricLieAlgebra& a, const Matrix& c, const Matrix& iso, int n, double tol) {
    ClassificationResult r;
    r.n = n;
    r.iso_matrix = iso;
    py::dict d;
    for (const auto& res : verify_isomorphism(a, ComplexStructure{c}, r, tol)) d[py::str(res.name)] = res.magnitude;
    return d;
  }, py::arg("algebra"), py::arg("complex"), py::arg("iso_matrix"), py::arg("n"), py::arg("tol") = kDefaultTolerance);

  m.def("load_algebra", [](const std::string& path, bool validate, double tol) {
    auto doc = load_algebra(path, LoadOptions{validate, tol});
    return py::make_tuple(doc.value.algebra, complex_matrix(doc.value), doc.metadata);
  }, py::arg("path"), py::arg("validate") = true, py::arg("tol") = kDefaultTolerance);
  m.def("save_algebra", [](const MetricLieAlgebra& a, const std::optional<Matrix>& c, const std::string& path,
                           const Metadata& metadata) { save_algebra(structured(a, c), path, metadata); },
        py::arg("algebra"), py::arg("complex"), py::arg("path"), py::arg("metadata") = Metadata{});
}
