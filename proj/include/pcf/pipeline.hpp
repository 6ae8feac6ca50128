#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pcf/cmf.hpp"
#include "pcf/coboundary.hpp"
#include "pcf/metrics.hpp"

namespace pcf {

inline constexpr int kCorpusSchema = 1;

enum class FormulaKind { Series, CF, Pcf, Recurrence };
std::string to_string(FormulaKind k);

// One harvested formula. Payload fields depend on the kind:
//   series      term (summand in n, summed from start_index)
//   cf, pcf     a, b (cf allows rational functions)
//   recurrence  coefficients [a_1 .. a_m] and denominator c for c(n) u_n = sum a_i(n) u_{n-i}
// declared_value is an expression in the constant's name, e.g. "(4+pi)/pi".
struct FormulaRecord {
  std::string id;
  std::string constant = "pi";
  FormulaKind kind = FormulaKind::Series;
  std::string term;
  std::string a, b;
  std::vector<std::string> coefficients;
  std::string denominator = "1";
  // First summation index for series; for the other kinds the index at which a, b or
  // the coefficients are first evaluated (1 is the usual convention there).
  long start_index = 0;
  std::optional<std::string> declared_value;
  std::vector<std::string> sources;
};

struct CmfNodeSpec {
  std::string id;
  std::string cmf = "pi";
  Direction direction;
  LatticePoint start;
};

struct Corpus {
  std::vector<FormulaRecord> formulas;
  std::vector<CmfNodeSpec> cmf_nodes;
  // CMF node id -> formula ids expected in its tree (used by regression checks).
  std::map<std::string, std::vector<std::string>> expected_clusters;
  // Ids folded into an earlier record with the same payload, mapped to the survivor.
  std::map<std::string, std::string> merged;
};

// Throws InputError with "formulas[i].field" paths. Blank input is an empty corpus.
Corpus parse_corpus_json(const std::string& text);
Corpus ingest_corpus(const std::string& path);

enum class NodeSource { Formula, Cmf };

struct GraphNode {
  std::string id;
  std::string constant;
  NodeSource source = NodeSource::Formula;
  PCF pcf;                              // canonical form (order 2)
  int order = 2;
  std::optional<Recurrence> recurrence;  // kept for order > 2
  Metrics metrics;
  std::optional<MatInt> value;  // a(0) + K of pcf as a Mobius image of the constant
  std::vector<std::string> sources;
  std::string origin;
  bool was_hub = false;

  bool clusterable() const { return order == 2; }
};

enum class ValidationStatus { Accepted, Unclusterable, Rejected };
std::string to_string(ValidationStatus s);

struct Validation {
  ValidationStatus status = ValidationStatus::Rejected;
  std::optional<GraphNode> node;
  std::string reason;
  std::string numerics;  // leading digits of the evaluated value on rejection
  // Non-fatal findings, e.g. a declared value that disagrees with the identified one.
  std::vector<std::string> warnings;
  std::optional<MatInt> identified;  // Mobius form of the formula's own value
};

struct ValidateOptions {
  long guess_terms = 200;
  int max_order = 3;
  int max_degree = 16;
  long depth = 4000;
  long digits = 250;
  long metric_depth = kMetricDepth;
};

// Series: guess a recurrence from the partial sums, re-index it so the first term sits
// at n = 0 and shift past the positive integer roots of b, then canonicalize.
struct SeriesCanonical {
  Recurrence recurrence;  // guessed, in the series' own index
  int order = 0;
  std::optional<PCF> pcf;  // order 2 only
  long root_shift = 0;
};
SeriesCanonical canonicalize_series(const std::string& term, long start_index, const ValidateOptions& opts = {});

// A PCF shifted past the last positive integer root of b.
PCF shift_past_roots(const PCF& p, long* shift = nullptr);

Validation validate_formula(const FormulaRecord& rec, const ValidateOptions& opts = {});
GraphNode make_cmf_node(const CMF& cmf, const CmfNodeSpec& spec, const ValidateOptions& opts = {});

struct GraphEdge {
  std::size_t parent = 0, child = 0;
  std::optional<CoboundaryCertificate> certificate;  // empty for structural edges
  std::string kind = "coboundary";                   // or "structural"
};

struct CoboundaryGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  std::vector<std::optional<std::size_t>> parent;  // index into edges' parent nodes

  std::vector<std::size_t> roots() const;
  std::size_t root_of(std::size_t i) const;
  // Node indices of the tree rooted at r, sorted by id.
  std::vector<std::size_t> tree(std::size_t r) const;
  std::optional<std::size_t> find(const std::string& id) const;
};

struct GrowOptions {
  MatchOptions match;
  int jobs = 1;
  long depth = 4000;
  long digits = 250;
};

// Bin centers -1.00, -0.95, ..., 0.00; delta is clamped to [-1, 0]. A node lies in every
// bin whose center is strictly closer than one bin width; the primary bin is the nearest.
inline constexpr int kBinCount = 21;
double bin_center(int k);
std::vector<int> bins_of(double delta);
int primary_bin(double delta);

CoboundaryGraph grow_coboundary_graph(std::vector<GraphNode> nodes, const GrowOptions& opts = {});

struct ReportFiles {
  std::vector<std::string> certificates;
  std::string summary;  // clusters.json
  std::string digest;   // report.md
};
std::string cluster_summary_json(const CoboundaryGraph& g);
std::string report_markdown(const CoboundaryGraph& g);
// Writes certificates/<parent>__<child>.json, clusters.json and report.md under dir.
ReportFiles export_report(const CoboundaryGraph& g, const std::string& dir);

// Validated corpus ready for clustering.
struct PreparedCorpus {
  std::vector<GraphNode> nodes;
  std::vector<std::pair<std::string, Validation>> rejected;  // includes the reason
};
PreparedCorpus prepare_corpus(const Corpus& corpus, const ValidateOptions& opts = {}, int jobs = 1);

}  // namespace pcf
