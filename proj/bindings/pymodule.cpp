#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcoex/coexistence.hpp"
#include "qcoex/operation.hpp"

namespace py = pybind11;

namespace {

using Mat = std::vector<std::vector<std::complex<double>>>;

qcoex::CMatrix to_cmatrix(const Mat& rows) {
  if (rows.empty() || rows.front().empty())
    throw qcoex::ParseError("matrix must be a nonempty nested list");
  qcoex::CMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw qcoex::ParseError("ragged matrix rows");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Mat from_cmatrix(const qcoex::CMatrix& m) {
  Mat rows(m.rows(), std::vector<std::complex<double>>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  return rows;
}

qcoex::DecisionMethod method_from_string(const std::string& m) {
  if (m == "auto") return qcoex::DecisionMethod::Auto;
  if (m == "closed-form-only") return qcoex::DecisionMethod::ClosedFormOnly;
  if (m == "solver-only") return qcoex::DecisionMethod::SolverOnly;
  throw qcoex::ParseError("unknown method: " + m);
}

py::dict decision_to_dict(const qcoex::CoexistenceDecision& dec) {
  py::dict d;
  d["verdict"] = qcoex::to_string(dec.verdict);
  d["method"] = dec.method;
  d["residual"] = dec.evidence.residual;
  d["iterations"] = dec.evidence.iterations;
  d["gap_estimate"] = dec.evidence.gap_estimate;
  if (dec.witness) {
    py::list outcomes;
    for (const auto& [label, op] : dec.witness->outcomes()) {
      py::dict o;
      o["label"] = label;
      o["choi"] = from_cmatrix(op.choi());
      outcomes.append(o);
    }
    d["witness"] = outcomes;
  } else {
    d["witness"] = py::none();
  }
  return d;
}

qcoex::SolverOptions make_options(double tol_feas, double tol_infeas, long max_iter) {
  qcoex::SolverOptions o;
  o.tol_feas = tol_feas;
  o.tol_infeas = tol_infeas;
  o.max_iter = max_iter;
  return o;
}

}  // namespace

PYBIND11_MODULE(_qcoex, m) {
  m.doc() = "Quantum operations, Choi/Kraus conversion, and coexistence decisions";

  py::register_exception<qcoex::Error>(m, "QcoexError");

  py::class_<qcoex::Operation>(m, "Operation")
      .def_static(
          "from_kraus",
          [](const std::vector<Mat>& kraus) {
            std::vector<qcoex::CMatrix> ks;
            for (const auto& k : kraus) ks.push_back(to_cmatrix(k));
            return qcoex::Operation::from_kraus(ks);
          },
          py::arg("kraus"))
      .def_static(
          "from_choi",
          [](std::size_t dim, const Mat& choi) {
            return qcoex::Operation::from_choi(dim, to_cmatrix(choi));
          },
          py::arg("dim"), py::arg("choi"))
      .def_property_readonly("dim", &qcoex::Operation::dim)
      .def("choi", [](const qcoex::Operation& op) { return from_cmatrix(op.choi()); })
      .def("to_kraus",
           [](const qcoex::Operation& op) {
             std::vector<Mat> out;
             for (const auto& k : op.to_kraus()) out.push_back(from_cmatrix(k));
             return out;
           })
      .def("induced_effect",
           [](const qcoex::Operation& op) {
             return from_cmatrix(op.induced_effect().matrix());
           })
      .def("kraus_rank", [](const qcoex::Operation& op) { return op.kraus_rank(); })
      .def("is_channel", [](const qcoex::Operation& op) { return op.is_channel(); })
      .def(
          "apply",
          [](const qcoex::Operation& op, const Mat& rho) {
            const auto result =
                op.apply(qcoex::DensityState(op.dim(), to_cmatrix(rho)));
            py::object cond = py::none();
            if (result.conditional) cond = py::cast(from_cmatrix(result.conditional->matrix()));
            return py::make_tuple(result.probability, cond);
          },
          py::arg("rho"));

  m.def(
      "luders",
      [](const Mat& a) {
        const auto ma = to_cmatrix(a);
        return qcoex::luders(qcoex::Effect(ma.rows(), ma));
      },
      py::arg("effect"));
  m.def(
      "preparator",
      [](const Mat& a, const Mat& xi) {
        const auto ma = to_cmatrix(a);
        const auto mxi = to_cmatrix(xi);
        return qcoex::preparator(qcoex::Effect(ma.rows(), ma),
                                 qcoex::DensityState(mxi.rows(), mxi));
      },
      py::arg("effect"), py::arg("state"));
  m.def(
      "unitary_channel",
      [](const Mat& u) { return qcoex::unitary_channel(to_cmatrix(u)); }, py::arg("u"));
  m.def("scale", &qcoex::scale, py::arg("op"), py::arg("lam"));
  m.def("null_operation", &qcoex::null_operation, py::arg("dim"));
  m.def("identity_operation", &qcoex::identity_operation, py::arg("dim"));

  m.def(
      "operations_coexistent",
      [](const qcoex::Operation& a, const qcoex::Operation& b, const std::string& method,
         double tol_feas, double tol_infeas, long max_iter) {
        return decision_to_dict(qcoex::operations_coexistent(
            a, b, method_from_string(method), make_options(tol_feas, tol_infeas, max_iter)));
      },
      py::arg("a"), py::arg("b"), py::arg("method") = "auto", py::arg("tol_feas") = 1e-7,
      py::arg("tol_infeas") = 1e-5, py::arg("max_iter") = 20000);

  m.def(
      "effects_coexistent",
      [](const Mat& a, const Mat& b, double tol_feas, double tol_infeas, long max_iter) {
        const auto ma = to_cmatrix(a);
        const auto mb = to_cmatrix(b);
        return decision_to_dict(qcoex::effects_coexistent(
            qcoex::Effect(ma.rows(), ma), qcoex::Effect(mb.rows(), mb),
            make_options(tol_feas, tol_infeas, max_iter)));
      },
      py::arg("a"), py::arg("b"), py::arg("tol_feas") = 1e-7,
      py::arg("tol_infeas") = 1e-5, py::arg("max_iter") = 20000);

  m.attr("__version__") = "0.1.0";
}
