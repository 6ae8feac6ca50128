#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "pcf/expr.hpp"
#include "pcf/pipeline.hpp"
#include "pcf/serialize.hpp"

using namespace pcf;

namespace {

std::string corpus_text(const std::string& records) {
  return R"J({"schema_version":1,"formulas":[)J" + records + "]}";
}

MatInt mobius(long a, long b, long c, long d) { return normalize_mobius(MatInt::of2(a, b, c, d)); }

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The five-formula mini-corpus is small enough to cluster once and share.
const CoboundaryGraph& table1_graph() {
  static const CoboundaryGraph g = [] {
    Corpus c = ingest_corpus(data_dir() + "/corpus/table1.json");
    return grow_coboundary_graph(prepare_corpus(c).nodes);
  }();
  return g;
}

std::vector<std::string> formula_members(const CoboundaryGraph& g, std::size_t root) {
  std::vector<std::string> out;
  for (std::size_t i : g.tree(root))
    if (g.nodes[i].source == NodeSource::Formula) out.push_back(g.nodes[i].id);
  return out;
}

}  // namespace

TEST_CASE("corpus ingestion") {
  CHECK(parse_corpus_json("").formulas.empty());
  CHECK(parse_corpus_json("  \n").cmf_nodes.empty());

  Corpus c = parse_corpus_json(corpus_text(R"J(
    {"id":"x1","constant":"pi","kind":"pcf","payload":{"a":"2n+1","b":"n^2"},"declared_value":"4/pi","source":"Gauss"},
    {"id":"x2","constant":"pi","kind":"pcf","payload":{"a":"2*n + 1","b":"n*n"},"source":"Euler"},
    {"id":"x3","constant":"pi","kind":"series","payload":{"term":"(-1)^n/(2n+1)"}})J"));
  REQUIRE(c.formulas.size() == 2);
  CHECK(c.formulas[0].sources == std::vector<std::string>{"Gauss", "Euler"});
  CHECK(c.merged.at("x2") == "x1");
  CHECK(c.formulas[1].start_index == 0);

  auto error_of = [](const std::string& text) {
    try {
      parse_corpus_json(text);
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  std::string bad_poly = error_of(corpus_text(R"J({"id":"x","constant":"pi","kind":"pcf","payload":{"a":"2n+","b":"n"}})J"));
  CHECK(bad_poly.find("formulas[0].payload.a") == 0);
  std::string bad_term =
      error_of(corpus_text(R"J({"id":"x","constant":"pi","kind":"series","payload":{"term":"binom(n)"}})J"));
  CHECK(bad_term.find("formulas[0].payload.term") == 0);
  CHECK(error_of(R"J({"formulas":[]})J").find("schema_version") != std::string::npos);
  CHECK(error_of(corpus_text(R"J({"id":"x","constant":"tau","kind":"pcf","payload":{"a":"1","b":"1"}})J"))
            .find("formulas[0].constant") == 0);
  CHECK(error_of(corpus_text(R"J({"id":"x","constant":"pi","kind":"pcf","payload":{"a":"1","b":"1"}},
                                {"id":"x","constant":"pi","kind":"pcf","payload":{"a":"2","b":"1"}})J"))
            .find("formulas[1].id") == 0);
  CHECK(error_of(corpus_text(R"J({"id":"x","constant":"pi","kind":"pcf","payload":{"a":"1","b":"1"},
                                 "declared_value":"pi^2"})J"))
            .find("formulas[0].declared_value") == 0);
  CHECK_THROWS_AS(ingest_corpus("/nonexistent/corpus.json"), InputError);
}

TEST_CASE("bundled corpus files ingest") {
  Corpus pi = ingest_corpus(data_dir() + "/corpus/pi.json");
  CHECK(pi.formulas.size() >= 90);
  CHECK(pi.cmf_nodes.size() == 7);
  CHECK(pi.expected_clusters.count("cmf(1,0,0)") == 1);
  for (const char* name : {"table1", "zeta3", "catalan", "e"})
    CHECK_FALSE(ingest_corpus(data_dir() + "/corpus/" + name + ".json").formulas.empty());
}

TEST_CASE("series validation") {
  FormulaRecord leibniz;
  leibniz.id = "leibniz";
  leibniz.term = "(-1)^n/(2n+1)";
  leibniz.declared_value = "pi/4";
  Validation v = validate_formula(leibniz);
  REQUIRE(v.status == ValidationStatus::Accepted);
  REQUIRE(v.node);
  CHECK(v.node->pcf == parse_pcf("PCF(2; (2n-1)^2)"));
  CHECK(*v.node->value == mobius(1, 4, 1, 0));
  CHECK(v.warnings.empty());
  CHECK(v.node->metrics.delta.delta == doctest::Approx(-1.0).epsilon(0.02));

  FormulaRecord row5;
  row5.id = "row5";
  row5.term = "4^n*(12n-5)/((2n-1)*binom(4n, 2n))";
  row5.start_index = 1;
  row5.declared_value = "3*pi/2+2";
  v = validate_formula(row5);
  REQUIRE(v.status == ValidationStatus::Accepted);
  CHECK(v.node->pcf.a == parse_poly("240n^3+164n^2-54n-29"));
  CHECK(v.node->pcf.b.degree() == 6);
  CHECK(*v.node->value == mobius(-42, -196, 3, 4));

  FormulaRecord wrong = leibniz;
  wrong.declared_value = "pi/3";
  v = validate_formula(wrong);
  CHECK(v.status == ValidationStatus::Accepted);
  REQUIRE(v.warnings.size() == 1);
  CHECK(v.warnings[0].find("pi/3") != std::string::npos);

  FormulaRecord rational;
  rational.id = "rational";
  rational.term = "22/7*(1/2)^(n+1)";
  rational.declared_value = "pi";
  v = validate_formula(rational);
  CHECK(v.status == ValidationStatus::Rejected);
  CHECK(v.reason.find("rational limit 22/7") != std::string::npos);
  CHECK(v.numerics.rfind("3.142857", 0) == 0);

  FormulaRecord pole;
  pole.id = "pole";
  pole.term = "1/(n-2)";
  CHECK(validate_formula(pole).status == ValidationStatus::Rejected);
}

TEST_CASE("direct and recurrence records") {
  FormulaRecord cf;
  cf.id = "cf";
  cf.kind = FormulaKind::CF;
  cf.start_index = 1;
  // Gauss's fraction with every partial quotient divided by n+1.
  cf.a = "(2n+1)/(n+1)";
  cf.b = "n/(n+1)";
  Validation v = validate_formula(cf);
  REQUIRE(v.status == ValidationStatus::Accepted);
  CHECK(v.node->pcf == parse_pcf("PCF(2n+1; n^2)"));
  REQUIRE(v.identified);
  CHECK(v.node->value);

  FormulaRecord shifted;
  shifted.id = "shifted";
  shifted.kind = FormulaKind::Pcf;
  shifted.start_index = 1;
  shifted.a = "3n+1";
  shifted.b = "n(1-2n)";
  shifted.declared_value = "2/pi";
  v = validate_formula(shifted);
  REQUIRE(v.status == ValidationStatus::Accepted);
  CHECK(v.node->pcf == parse_pcf("PCF(3n+1; n(1-2n))"));
  CHECK(v.node->metrics.rate.rate == doctest::Approx(0.69).epsilon(0.03));

  FormulaRecord rec3;
  rec3.id = "third";
  rec3.kind = FormulaKind::Recurrence;
  rec3.start_index = 1;
  rec3.coefficients = {"2n", "n^2", "1"};
  v = validate_formula(rec3);
  CHECK(v.status == ValidationStatus::Unclusterable);
  REQUIRE(v.node);
  CHECK(v.node->order == 3);
  CHECK_FALSE(v.node->clusterable());

  FormulaRecord rec2;
  rec2.id = "second";
  rec2.kind = FormulaKind::Recurrence;
  rec2.start_index = 1;
  rec2.coefficients = {"2n+1", "n^2"};
  v = validate_formula(rec2);
  REQUIRE(v.status == ValidationStatus::Accepted);
  CHECK(v.node->pcf == parse_pcf("PCF(2n+1; n^2)"));
}

TEST_CASE("delta bins") {
  CHECK(bins_of(-0.65) == std::vector<int>{7});
  CHECK(primary_bin(-0.65) == 7);
  CHECK(bins_of(-2.0) == std::vector<int>{0});
  CHECK(bins_of(0.3) == std::vector<int>{20});
  CHECK(bin_center(0) == doctest::Approx(-1.0));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(-1.2, 0.2);
  for (int i = 0; i < 500; ++i) {
    double x = d(rng);
    auto b = bins_of(x);
    CHECK((b.size() == 1 || b.size() == 2));
    CHECK(std::find(b.begin(), b.end(), primary_bin(x)) != b.end());
    for (int k : b) CHECK(std::fabs(std::clamp(x, -1.0, 0.0) - bin_center(k)) < 0.05 + 1e-12);
  }
}

TEST_CASE("graph growing on trivial inputs") {
  CoboundaryGraph empty = grow_coboundary_graph({});
  CHECK(empty.nodes.empty());
  CHECK(cluster_summary_json(empty).find("\"clusters\": []") != std::string::npos);

  FormulaRecord gauss;
  gauss.id = "g1";
  gauss.kind = FormulaKind::Pcf;
  gauss.start_index = 1;
  gauss.a = "2n+1";
  gauss.b = "n^2";
  GraphNode node = *validate_formula(gauss).node;
  CoboundaryGraph one = grow_coboundary_graph({node});
  CHECK(one.roots().size() == 1);
  CHECK(one.edges.empty());

  GraphNode copy = node;
  copy.id = "g2";
  CoboundaryGraph two = grow_coboundary_graph({copy, node});
  REQUIRE(two.edges.size() == 1);
  const GraphEdge& e = two.edges[0];
  CHECK(two.nodes[e.parent].id == "g1");
  CHECK(two.nodes[e.child].id == "g2");
  REQUIRE(e.certificate);
  CHECK(projectively_equal(to_rf(e.certificate->U), MatRF::identity(2)));
  CHECK(e.certificate->p_a == e.certificate->p_b);
  CHECK(two.nodes[e.parent].was_hub);
}

TEST_CASE("five-formula mini-corpus clusters with CMF roots") {
  const CoboundaryGraph& g = table1_graph();
  REQUIRE(g.nodes.size() == 7);
  auto r100 = g.find("cmf(1,0,0)"), r111 = g.find("cmf(1,1,1)");
  REQUIRE(r100);
  REQUIRE(r111);
  CHECK(g.roots() == std::vector<std::size_t>{std::min(*r100, *r111), std::max(*r100, *r111)});
  CHECK(formula_members(g, *r100) == std::vector<std::string>{"t1-1", "t1-2", "t1-5"});
  CHECK(formula_members(g, *r111) == std::vector<std::string>{"t1-3", "t1-4"});

  // Forest: one parent at most, CMF nodes never children, every certificate re-verifies.
  std::vector<int> parents(g.nodes.size(), 0);
  for (const auto& e : g.edges) {
    ++parents[e.child];
    CHECK(g.nodes[e.child].source == NodeSource::Formula);
    REQUIRE(e.certificate);
    CHECK(check_certificate(*e.certificate));
    CHECK(e.certificate->pcf_a.str() != "");
  }
  for (int p : parents) CHECK(p <= 1);
}

TEST_CASE("certificates survive serialization") {
  const CoboundaryGraph& g = table1_graph();
  REQUIRE_FALSE(g.edges.empty());
  for (const auto& e : g.edges) {
    std::string text = certificate_to_json(*e.certificate, g.nodes[e.parent].id, g.nodes[e.child].id);
    CertificateDocument doc = certificate_from_json(text);
    CHECK(doc.id_a == g.nodes[e.parent].id);
    CHECK(doc.id_b == g.nodes[e.child].id);
    CHECK(doc.certificate.hash == e.certificate->hash);
    std::string why;
    CHECK_MESSAGE(check_certificate(doc.certificate, &why), why);
    CHECK(certificate_to_json(doc.certificate, doc.id_a, doc.id_b) == text);
  }
  CHECK_THROWS_AS(certificate_from_json("{}"), InputError);
  CHECK_THROWS_AS(certificate_from_json("not json"), InputError);
  std::string text = certificate_to_json(*g.edges[0].certificate, "a", "b");
  auto pos = text.find("\"p_a\": \"");
  REQUIRE(pos != std::string::npos);
  std::string tampered = text;
  tampered.replace(pos, 8, "\"p_a\": \"7*");
  CHECK_FALSE(check_certificate(certificate_from_json(tampered).certificate));
}

TEST_CASE("reports are deterministic") {
  namespace fs = std::filesystem;
  const CoboundaryGraph& g = table1_graph();
  fs::path base = fs::temp_directory_path() / "pcf_report_test";
  fs::remove_all(base);
  ReportFiles a = export_report(g, (base / "a").string());
  ReportFiles b = export_report(g, (base / "b").string());
  CHECK(a.certificates.size() == g.edges.size());
  REQUIRE(a.certificates.size() == b.certificates.size());
  for (std::size_t i = 0; i < a.certificates.size(); ++i) {
    CHECK(read_file(a.certificates[i]) == read_file(b.certificates[i]));
    CHECK(check_certificate(certificate_from_json(read_file(a.certificates[i])).certificate));
  }
  CHECK(read_file(a.summary) == read_file(b.summary));
  CHECK(read_file(a.digest) == read_file(b.digest));
  std::string summary = read_file(a.summary);
  CHECK(summary.find("\"root\": \"cmf(1,0,0)\"") != std::string::npos);
  CHECK(summary.find("\"delta\": \"-0.65") != std::string::npos);

  ReportFiles e = export_report(grow_coboundary_graph({}), (base / "empty").string());
  CHECK(e.certificates.empty());
  CHECK(read_file(e.summary).find("\"schema_version\": 1") != std::string::npos);
  fs::remove_all(base);
}

TEST_CASE("alternating series with half-integer decay still identify") {
  // Terms decay like n^(-9/2), so the error expands in half-integer powers of 1/n.
  FormulaRecord r;
  r.id = "alt";
  r.term = "(-1/64)^n*(4n-1)*binom(2n, n)^3/(2n-1)^3";
  Validation v = validate_formula(r);
  REQUIRE(v.status == ValidationStatus::Accepted);
  REQUIRE(v.identified);
  CHECK(*v.identified == mobius(0, 2, 1, 0));
}

TEST_CASE("a vanishing first term does not break the series evaluation") {
  FormulaRecord r;
  r.id = "zero-first";
  r.term = "(1/4096)^n*n^2*(504n^2-314n-11)*binom(2n, n)^3";
  r.declared_value = "4/(3*pi)";
  Validation v = validate_formula(r);
  REQUIRE(v.status == ValidationStatus::Accepted);
  CHECK(v.warnings.empty());
}
