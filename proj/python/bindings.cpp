// Python bindings over string-typed entry points. PCFs, polynomials and lattice points
// cross the boundary as text in the same grammar the CLI accepts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pcf/cmf.hpp"
#include "pcf/coboundary.hpp"
#include "pcf/expr.hpp"
#include "pcf/pipeline.hpp"
#include "pcf/serialize.hpp"
#include "pcf/transforms.hpp"

namespace py = pybind11;
using namespace pcf;

namespace {

py::dict limit_text(const std::string& text, long depth, long digits) {
  PCF p = parse_pcf(text);
  ApproxValue v = evaluate_limit(p, std::nullopt, depth, digits_to_bits(digits) + 64);
  int shown = static_cast<int>(std::max<long>(10, std::min(digits, v.reliable_digits())));
  py::dict out;
  out["K"] = v.value.str(shown);
  out["value"] = cf_value(p, v).value.str(shown);
  out["digits"] = v.reliable_digits();
  out["method"] = v.method;
  out["converged"] = v.converged;
  return out;
}

std::optional<std::vector<std::string>> identify_text(const std::string& text, const std::string& constant, long depth) {
  PCF p = parse_pcf(text);
  ApproxValue v = evaluate_limit(p, std::nullopt, depth, digits_to_bits(250) + 64);
  auto id = identify_mobius(cf_value(p, v), constant);
  if (!id) return std::nullopt;
  std::vector<std::string> m;
  for (const auto& e : id->matrix.data()) m.push_back(e.get_str());
  return m;
}

py::tuple canonicalize_text(const std::string& text) {
  // Accept rational partial quotients by going through the CLI-style "PCF(a; b)" split.
  std::string inner = text;
  auto open = inner.find('('), close = inner.rfind(')');
  if (open == std::string::npos || close == std::string::npos) throw InputError("expected PCF(a; b)");
  inner = inner.substr(open + 1, close - open - 1);
  auto cut = inner.find(';');
  if (cut == std::string::npos) throw InputError("PCF needs two parts separated by ';'");
  CanonicalResult c = to_pcf_canonical(RationalPCF{parse_rf(inner.substr(0, cut)), parse_rf(inner.substr(cut + 1))});
  return py::make_tuple(pcf_to_text(c.pcf), c.trace.str());
}

py::dict guess_series(const std::string& term, long start) {
  SeriesCanonical sc = canonicalize_series(term, start);
  py::dict out;
  out["order"] = sc.order;
  out["recurrence"] = sc.recurrence.str();
  out["canonical"] = sc.pcf ? py::object(py::str(pcf_to_text(*sc.pcf))) : py::object(py::none());
  return out;
}

std::optional<std::string> match_text(const std::string& a, const std::string& b, const std::string& constant) {
  MatchInputs in{parse_pcf(a), parse_pcf(b), std::nullopt, std::nullopt};
  in.metrics_a = compute_metrics(in.a);
  in.metrics_b = compute_metrics(in.b);
  MatchResult r;
  {
    py::gil_scoped_release release;
    r = match_pair(in, default_identifier(constant));
  }
  if (r.status != MatchStatus::Matched) return std::nullopt;
  return certificate_to_json(*r.certificate, "A", "B");
}

bool verify_text(const std::string& json) {
  CertificateDocument d = certificate_from_json(json);
  return check_certificate(d.certificate);
}

std::string trajectory_text(const std::string& direction, const std::string& start) {
  const CMF& cmf = pi_cmf();
  LatticePoint x = start.empty() ? cmf.default_start : parse_point(start);
  TrajectoryMatrix tm = trajectory_matrix(cmf, x, parse_direction(direction));
  return pcf_to_text(to_companion(tm.matrix).canonical.pcf);
}

std::string cluster_path(const std::string& path, int jobs) {
  py::gil_scoped_release release;
  Corpus corpus = ingest_corpus(path);
  PreparedCorpus prep = prepare_corpus(corpus, {}, jobs);
  GrowOptions go;
  go.jobs = jobs;
  return cluster_summary_json(grow_coboundary_graph(prep.nodes, go));
}

}  // namespace

PYBIND11_MODULE(_pcfunify, m) {
  m.doc() = "Polynomial continued fraction canonicalization and coboundary matching";
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<MathError>(m, "MathError", PyExc_ArithmeticError);
  py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_ArithmeticError);

  m.def("limit", &limit_text, py::arg("pcf"), py::arg("depth") = 4000, py::arg("digits") = 100,
        "Limit of PCF(a; b); 'value' is a(0)+K and 'K' the tail fraction.");
  m.def("identify", &identify_text, py::arg("pcf"), py::arg("constant") = "pi", py::arg("depth") = 4000,
        "Mobius matrix [m00, m01, m10, m11] with a(0)+K = (m00 c + m01)/(m10 c + m11), or None.");
  m.def("delta", [](const std::string& t, long depth) { return irrationality_delta(parse_pcf(t), depth).delta; },
        py::arg("pcf"), py::arg("depth") = kMetricDepth);
  m.def("rate", [](const std::string& t, long depth) { return convergence_rate(parse_pcf(t), depth).rate; },
        py::arg("pcf"), py::arg("depth") = kMetricDepth);
  m.def("canonicalize", &canonicalize_text, py::arg("pcf"), "(canonical PCF text, transform trace)");
  m.def("fold", [](const std::string& t, int k) { return pcf_to_text(fold_pcf(parse_pcf(t), k).pcf); },
        py::arg("pcf"), py::arg("k"));
  m.def("guess_series", &guess_series, py::arg("term"), py::arg("start") = 0);
  m.def("match", &match_text, py::arg("a"), py::arg("b"), py::arg("constant") = "pi",
        "Certificate JSON when a coboundary is found, else None.");
  m.def("verify", &verify_text, py::arg("certificate_json"));
  m.def("pi_cmf_is_conserving", [] { return check_conserving(pi_cmf()).empty(); });
  m.def("trajectory", &trajectory_text, py::arg("direction"), py::arg("start") = "",
        "Canonical PCF of a trajectory through the bundled pi field.");
  m.def("cluster", &cluster_path, py::arg("corpus_path"), py::arg("jobs") = 1, "Cluster summary JSON.");
}
