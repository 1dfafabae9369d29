#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "gamx/component_analysis.h"
#include "gamx/counting.h"
#include "gamx/errors.h"
#include "gamx/io.h"
#include "gamx/oracle.h"
#include "gamx/redundancy.h"
#include "gamx/shap.h"
#include "gamx/sufficiency.h"

namespace py = pybind11;

namespace gamx {
namespace {

py::object ToPy(const Rational& r) {
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(ToString(r));
}

Rational FromPy(const py::handle& v) { return ParseRational(py::str(v).cast<std::string>()); }

Instance ToInstance(const py::sequence& seq) {
  Instance x;
  for (const auto& v : seq) x.push_back(FromPy(v));
  return x;
}

py::list InstanceToPy(const Instance& x) {
  py::list out;
  for (const Rational& v : x) out.append(ToPy(v));
  return out;
}

// 1-based feature indices on the Python side, as in the CLI.
FeatureSubset ToSubset(const std::vector<std::size_t>& one_based) {
  std::vector<std::size_t> idx;
  for (std::size_t i : one_based) {
    if (i == 0) Fail(ErrorKind::kValidation, "feature indices are 1-based");
    idx.push_back(i - 1);
  }
  std::sort(idx.begin(), idx.end());
  return FeatureSubset(idx);
}

py::list SubsetToPy(const FeatureSubset& s) {
  py::list out;
  for (std::size_t i : s.indices()) out.append(i + 1);
  return out;
}

ProductDistribution DistFor(const GamModel& m, const std::optional<std::string>& dist) {
  return dist ? LoadDistribution(*dist) : UniformProduct(m.num_features());
}

std::size_t Feature(const GamModel& m, std::size_t one_based) {
  if (one_based == 0 || one_based > m.num_features()) Fail(ErrorKind::kValidation, "feature index out of range");
  return one_based - 1;
}

}  // namespace
}  // namespace gamx

PYBIND11_MODULE(_core, m) {
  using namespace gamx;
  m.doc() = "Exact explanations for generalized additive models";

  static py::exception<Error> error(m, "GamxError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(ErrorKindName(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<GamModel, std::shared_ptr<GamModel>>(m, "Model")
      .def_property_readonly("num_features", &GamModel::num_features)
      .def_property_readonly("task",
                             [](const GamModel& g) {
                               return g.task() == Task::kRegression ? "regression" : "classification";
                             })
      .def("evaluate", [](const GamModel& g, const py::sequence& x) { return ToPy(Evaluate(g, ToInstance(x))); })
      .def("evaluate_component",
           [](const GamModel& g, std::size_t i, const py::object& v) {
             return ToPy(EvaluateComponent(g, Feature(g, i), FromPy(v)));
           })
      .def("serialize", [](const GamModel& g) { return SerializeModel(g); });

  m.def("load_model", [](const std::string& text) { return std::make_shared<GamModel>(LoadModel(text)); });

  m.def(
      "check_sufficient",
      [](const GamModel& g, const py::sequence& x, const std::vector<std::size_t>& subset, std::size_t budget) {
        const SufficiencyResult r = CheckSufficient(g, ToInstance(x), ToSubset(subset), budget);
        py::dict out;
        out["sufficient"] = r.sufficient;
        out["witness"] = r.witness ? py::object(InstanceToPy(*r.witness)) : py::none();
        return out;
      },
      py::arg("model"), py::arg("x"), py::arg("subset"), py::arg("budget") = kDefaultPieceBudget);

  m.def(
      "minimal_sufficient",
      [](const GamModel& g, const py::sequence& x, std::size_t budget) {
        return SubsetToPy(MinimalSufficient(g, ToInstance(x), budget).subset);
      },
      py::arg("model"), py::arg("x"), py::arg("budget") = kDefaultPieceBudget);

  m.def(
      "minimal_contrastive",
      [](const GamModel& g, const py::sequence& x, std::size_t budget) {
        const ReasonCertificate c = MinimalContrastive(g, ToInstance(x), budget);
        py::dict out;
        out["subset"] = SubsetToPy(c.subset);
        out["witness"] = c.witness ? py::object(InstanceToPy(*c.witness)) : py::none();
        return out;
      },
      py::arg("model"), py::arg("x"), py::arg("budget") = kDefaultPieceBudget);

  m.def(
      "is_redundant",
      [](const GamModel& g, std::size_t feature, std::size_t budget) {
        const RedundancyResult r = IsRedundant(g, Feature(g, feature), budget);
        py::dict out;
        out["redundant"] = r.redundant;
        out["method"] = r.method;
        if (r.witness) {
          out["witness"] = py::make_tuple(InstanceToPy(r.witness->base), ToPy(r.witness->v1), ToPy(r.witness->v2));
        } else {
          out["witness"] = py::none();
        }
        return out;
      },
      py::arg("model"), py::arg("feature"), py::arg("budget") = kDefaultPieceBudget);

  m.def(
      "count_completions",
      [](const GamModel& g, const py::sequence& x, const std::vector<std::size_t>& subset,
         std::optional<unsigned> digits) {
        auto shared = std::make_shared<const GamModel>(g);
        const QuantizedModel q = digits ? Quantize(shared, *digits) : QuantizeWithScale(shared, ExactScale(g));
        const BoundedValue v = CountCompletions(q, ToInstance(x), ToSubset(subset));
        py::dict out;
        out["value"] = ToPy(v.value);
        out["lower"] = ToPy(v.lower);
        out["upper"] = ToPy(v.upper);
        out["exact"] = v.exact;
        return out;
      },
      py::arg("model"), py::arg("x"), py::arg("subset"), py::arg("digits") = py::none());

  m.def(
      "shap",
      [](const GamModel& g, const py::sequence& x, std::optional<std::string> dist, std::optional<unsigned> digits) {
        const ShapResult r = ShapAll(g, ToInstance(x), DistFor(g, dist), digits);
        py::dict out;
        py::list values;
        for (const Rational& v : r.values) values.append(ToPy(v));
        out["values"] = values;
        out["baseline"] = ToPy(r.baseline);
        out["full"] = ToPy(r.full);
        out["exact"] = r.exact;
        return out;
      },
      py::arg("model"), py::arg("x"), py::arg("dist") = py::none(), py::arg("digits") = py::none());

  m.def("oracle_sufficient", [](const GamModel& g, const py::sequence& x, const std::vector<std::size_t>& subset) {
    return OracleSufficient(g, ToInstance(x), ToSubset(subset));
  });
  m.def("oracle_min_sufficient", [](const GamModel& g, const py::sequence& x) {
    return OracleMinSufficient(g, ToInstance(x)).cardinality;
  });
  m.def("oracle_min_contrastive", [](const GamModel& g, const py::sequence& x) -> py::object {
    auto r = OracleMinContrastive(g, ToInstance(x));
    return r ? py::cast(r->cardinality) : py::none();
  });
  m.def("oracle_cc", [](const GamModel& g, const py::sequence& x, const std::vector<std::size_t>& subset) {
    return ToPy(OracleCc(g, ToInstance(x), ToSubset(subset)));
  });
  m.def(
      "oracle_shap",
      [](const GamModel& g, const py::sequence& x, std::optional<std::string> dist) {
        py::list values;
        for (const Rational& v : OracleShap(g, ToInstance(x), DistFor(g, dist))) values.append(ToPy(v));
        return values;
      },
      py::arg("model"), py::arg("x"), py::arg("dist") = py::none());
  m.def("oracle_redundant",
        [](const GamModel& g, std::size_t feature) { return OracleRedundant(g, Feature(g, feature)); });
}
