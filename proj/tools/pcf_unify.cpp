// pcf-unify: command-line front end to the pcfcore library.
//
// Exit codes: 0 success, 1 not matched / not found, 2 input error, 3 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pcf/cmf.hpp"
#include "pcf/coboundary.hpp"
#include "pcf/expr.hpp"
#include "pcf/guess.hpp"
#include "pcf/pipeline.hpp"
#include "pcf/serialize.hpp"
#include "pcf/terms.hpp"

using namespace pcf;

namespace {

constexpr int kOk = 0, kNotFound = 1, kInputError = 2, kVerifyFailed = 3;

struct Globals {
  long depth = 0;  // 0: each command's own default
  long digits = 250;
  double delta_tol = 0.05;
  int fold_cap = 3;
  int degree_cap = 24;
  long radius = 10;
  int jobs = 1;

  long depth_or(long fallback) const { return depth > 0 ? depth : fallback; }
  long bits() const { return digits_to_bits(digits) + 64; }
  MatchOptions match() const {
    MatchOptions m;
    m.delta_tol = delta_tol;
    m.fold_cap = fold_cap;
    m.degree_cap = degree_cap;
    return m;
  }
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

// "PCF(a; b)" with rational a and b.
RationalPCF parse_rational_pcf(const std::string& text) {
  std::string s = text;
  auto open = s.find('('), close = s.rfind(')');
  if (s.rfind("PCF", 0) != 0 || open == std::string::npos || close == std::string::npos || close < open)
    throw InputError("expected PCF(a; b), got '" + text + "'");
  std::string inner = s.substr(open + 1, close - open - 1);
  int level = 0;
  std::size_t cut = std::string::npos;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    char ch = inner[i];
    if (ch == '(') ++level;
    if (ch == ')') --level;
    if (level == 0 && (ch == ';' || (ch == ',' && cut == std::string::npos))) {
      cut = i;
      if (ch == ';') break;
    }
  }
  if (cut == std::string::npos) throw InputError("PCF needs two parts separated by ';'");
  return {parse_rf(inner.substr(0, cut)), parse_rf(inner.substr(cut + 1))};
}

MatQ parse_matrix4(const std::string& text) {
  LatticePoint q = parse_point(text);
  if (q.size() != 4) throw InputError("initial conditions need four entries a,b,c,d");
  return MatQ::of2(q[0], q[1], q[2], q[3]);
}

std::string metrics_line(const Metrics& m) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "delta %.4f%s  rate %.4f (raw %.4f)", m.delta.delta, m.delta.defined ? "" : " (undefined)",
                m.rate.rate, m.rate.raw);
  return buf;
}

int cmd_eval(const Globals& g, const std::string& text, const std::string& init_text, long from) {
  PCF p = parse_pcf(text);
  std::optional<InitialConditions> init;
  if (!init_text.empty()) init = InitialConditions{parse_matrix4(init_text), from};
  ApproxValue v = evaluate_limit(p, init, g.depth_or(4000), g.bits());
  int shown = static_cast<int>(std::min<long>(g.digits, std::max<long>(v.reliable_digits(), 10)));
  std::cout << "K          " << v.value.str(shown) << "\n";
  if (!init) std::cout << "a(0)+K     " << cf_value(p, v.value).str(shown) << "\n";
  std::cout << "digits     " << v.reliable_digits() << " (" << v.method << ", depth " << v.depth << ", from n="
            << v.start_index << ")\n";
  if (!v.converged) {
    std::cout << "warning    no convergence detected\n";
    return kNotFound;
  }
  for (const auto& c : known_constants()) {
    try {
      IdentifyOptions io;
      io.max_digits = g.digits;
      io.min_digits = std::min<long>(io.min_digits, std::max<long>(20, g.digits / 2));
      auto id = identify_mobius(init ? v : cf_value(p, v), c, io);
      if (id) {
        std::cout << "identified " << mat_str(id->matrix) << " applied to " << c << " (" << id->verified_digits
                  << " digits)\n";
        break;
      }
    } catch (const PrecisionError&) {
      break;
    }
  }
  return kOk;
}

int cmd_metric(const Globals& g, const std::string& text, bool delta) {
  PCF p = parse_pcf(text);
  long depth = g.depth_or(kMetricDepth);
  if (delta) {
    DeltaEstimate d = irrationality_delta(p, depth);
    std::printf("%.6f\n", d.delta);
    if (!d.defined) std::cerr << "undefined: " << d.note << "\n";
    return d.defined ? kOk : kNotFound;
  }
  RateEstimate r = convergence_rate(p, depth);
  std::printf("%.6f\n", r.rate);
  return kOk;
}

int cmd_canonicalize(const std::string& text) {
  CanonicalResult c = to_pcf_canonical(parse_rational_pcf(text));
  long shift = 0;
  PCF shifted = shift_past_roots(c.pcf, &shift);
  std::cout << pcf_to_text(c.pcf) << "\n";
  std::cout << "trace: " << (c.trace.steps.empty() ? "(none)" : c.trace.str()) << "\n";
  if (shift > 0) std::cout << "evaluated from n=" << shift + 1 << " as " << pcf_to_text(shifted) << "\n";
  return kOk;
}

int cmd_guess(const Globals& g, const std::string& term, long start, long terms, int max_order, int max_degree) {
  ValidateOptions vo;
  vo.guess_terms = terms;
  vo.max_order = max_order;
  vo.max_degree = max_degree;
  vo.depth = g.depth_or(4000);
  vo.digits = g.digits;
  SeriesCanonical sc;
  try {
    sc = canonicalize_series(term, start, vo);
  } catch (const MathError& e) {
    std::cout << e.what() << "\n";
    return kNotFound;
  }
  std::cout << "order " << sc.order << "\n";
  std::cout << "recurrence " << sc.recurrence.str() << "\n";
  if (sc.pcf) std::cout << "canonical " << pcf_to_text(*sc.pcf) << "\n";
  return kOk;
}

int cmd_match(const Globals& g, const std::string& ta, const std::string& tb, const std::string& constant,
              const std::string& out) {
  if (!is_known_constant(constant)) throw InputError("unknown constant '" + constant + "'");
  MatchInputs in;
  in.a = parse_pcf(ta);
  in.b = parse_pcf(tb);
  in.metrics_a = compute_metrics(in.a);
  in.metrics_b = compute_metrics(in.b);
  MatchResult r = match_pair(in, default_identifier(constant, g.depth_or(4000), g.digits), g.match());
  for (const auto& d : r.diagnostics) std::cerr << "  " << d << "\n";
  std::cerr << to_string(r.status) << "\n";
  if (r.status == MatchStatus::VerifyFailed) return kVerifyFailed;
  if (r.status != MatchStatus::Matched) return kNotFound;
  std::string json = certificate_to_json(*r.certificate, "A", "B");
  if (out.empty())
    std::cout << json;
  else
    write_text(out, json);
  return kOk;
}

int cmd_verify(const std::string& path) {
  CertificateDocument doc = certificate_from_json(read_text(path));
  std::string why;
  if (!check_certificate(doc.certificate, &why)) {
    std::cout << "FAILED " << doc.id_a << " ~ " << doc.id_b << ": " << why << "\n";
    return kVerifyFailed;
  }
  std::cout << "verified " << doc.id_a << " ~ " << doc.id_b << " (hash " << doc.certificate.hash << ")\n";
  return kOk;
}

const CMF& resolve_cmf(const std::string& path, CMF& storage) {
  if (path.empty()) return pi_cmf();
  storage = load_cmf(path);
  return storage;
}

LatticePoint start_point(const CMF& cmf, const std::string& text) {
  if (!text.empty()) return parse_point(text);
  if (cmf.default_start.empty()) throw InputError("--start is required for this CMF");
  return cmf.default_start;
}

int cmd_cmf_check(const std::string& path) {
  CMF storage;
  const CMF& cmf = resolve_cmf(path, storage);
  auto v = check_conserving(cmf);
  if (v.empty()) {
    std::cout << "conserving: all " << cmf.dim() * (cmf.dim() - 1) / 2 << " axis pairs commute\n";
    return kOk;
  }
  for (const auto& e : v)
    std::cout << "violation: axes " << cmf.variables[e.i] << "," << cmf.variables[e.j] << " entry (" << e.row << ","
              << e.col << ")\n";
  return kVerifyFailed;
}

int cmd_cmf_trajectory(const Globals& g, const std::string& path, const std::string& dir, const std::string& start) {
  CMF storage;
  const CMF& cmf = resolve_cmf(path, storage);
  TrajectoryMatrix tm = trajectory_matrix(cmf, start_point(cmf, start), parse_direction(dir));
  std::cout << "T(n) = " << mat_str(tm.matrix) << "\n";
  if (tm.shift > 0) std::cout << "shifted by " << tm.shift << " to start at " << point_str(tm.origin) << "\n";
  CompanionForm cf = to_companion(tm.matrix);
  PCF p = shift_past_roots(cf.canonical.pcf);
  std::cout << "canonical " << pcf_to_text(p) << "\n";
  std::cout << "trace: " << (cf.canonical.trace.steps.empty() ? "(none)" : cf.canonical.trace.str()) << "\n";
  std::cout << metrics_line(compute_metrics(p, g.depth_or(kMetricDepth))) << "\n";
  return kOk;
}

int cmd_cmf_scan(const Globals& g, const std::string& path, const std::string& start, bool all) {
  CMF storage;
  const CMF& cmf = resolve_cmf(path, storage);
  ScanOptions so;
  so.radius = g.radius;
  so.jobs = g.jobs;
  so.primitive_only = !all;
  so.depth = g.depth_or(kMetricDepth);
  auto scan = scan_trajectories(cmf, start_point(cmf, start), so);
  for (const auto& e : scan) {
    std::cout << direction_str(e.direction) << "\t";
    if (!e.error.empty()) {
      std::cout << "error: " << e.error << "\n";
      continue;
    }
    std::cout << pcf_to_text(*e.pcf);
    if (e.metrics) std::cout << "\t" << metrics_line(*e.metrics);
    std::cout << "\n";
  }
  return kOk;
}

CoboundaryGraph run_corpus(const Globals& g, const std::string& path, bool quiet) {
  Corpus corpus = ingest_corpus(path);
  ValidateOptions vo;
  vo.depth = g.depth_or(4000);
  vo.digits = g.digits;
  PreparedCorpus prep = prepare_corpus(corpus, vo, g.jobs);
  if (!quiet) {
    for (const auto& [id, v] : prep.rejected)
      std::cerr << "rejected " << id << ": " << v.reason << (v.numerics.empty() ? "" : " (value " + v.numerics + ")")
                << "\n";
    for (const auto& [dup, kept] : corpus.merged) std::cerr << "merged " << dup << " into " << kept << "\n";
  }
  GrowOptions go;
  go.match = g.match();
  go.jobs = g.jobs;
  go.depth = vo.depth;
  go.digits = g.digits;
  return grow_coboundary_graph(prep.nodes, go);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unify polynomial continued fraction formulas through coboundary equivalence"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--depth", g.depth, "Recurrence depth (default: 4000 for limits, 2000 for metrics)");
  app.add_option("--precision-digits", g.digits, "Decimal digits for limits and identification")->check(CLI::Range(30L, 5000L));
  app.add_option("--delta-tol", g.delta_tol, "Maximum delta difference for a match attempt");
  app.add_option("--fold-cap", g.fold_cap, "Largest fold tried when rates differ")->check(CLI::Range(1, 12));
  app.add_option("--degree-cap", g.degree_cap, "Total degree cap when fitting U(n)")->check(CLI::Range(1, 200));
  app.add_option("--radius", g.radius, "CMF scan radius (directions with |v_i| < radius)")->check(CLI::Range(1L, 100L));
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::Range(1, 256));

  std::string a, b, init, term, constant = "pi", out, cmf_path, direction, start;
  long from = 1, start_index = 0, terms = 200;
  int max_order = 3, max_degree = 16;
  bool all_dirs = false;

  auto* eval = app.add_subcommand("eval", "Evaluate a PCF limit");
  eval->add_option("pcf", a, "PCF(a; b)")->required();
  eval->add_option("--init", init, "Initial conditions a,b,c,d");
  eval->add_option("--from", from, "First companion index the initial matrix multiplies");
  auto* delta = app.add_subcommand("delta", "Irrationality measure estimate");
  delta->add_option("pcf", a, "PCF(a; b)")->required();
  auto* rate = app.add_subcommand("rate", "Convergence rate estimate");
  rate->add_option("pcf", a, "PCF(a; b)")->required();
  auto* canon = app.add_subcommand("canonicalize", "Canonical PCF of a (rational) continued fraction");
  canon->add_option("pcf", a, "PCF(a; b), rational a and b allowed")->required();
  auto* guess = app.add_subcommand("guess", "Guess the recurrence of a series' partial sums");
  guess->add_option("term", term, "Summand in n")->required();
  guess->add_option("--start", start_index, "First summation index");
  guess->add_option("--terms", terms, "Partial sums used");
  guess->add_option("--max-order", max_order);
  guess->add_option("--max-degree", max_degree);
  auto* match = app.add_subcommand("match", "Search for a coboundary between two PCFs");
  match->add_option("A", a, "PCF(a; b)")->required();
  match->add_option("B", b, "PCF(a; b)")->required();
  match->add_option("--constant", constant, "Constant used for Mobius identification");
  match->add_option("--out", out, "Write the certificate here instead of stdout");
  auto* verify = app.add_subcommand("verify", "Re-verify a certificate file");
  verify->add_option("CERT", a, "Certificate JSON")->required();
  auto* cmf = app.add_subcommand("cmf", "Conservative matrix field tools");
  cmf->require_subcommand(1);
  auto* cmf_check = cmf->add_subcommand("check", "Check the conservation identities");
  auto* cmf_traj = cmf->add_subcommand("trajectory", "Trajectory recurrence along a direction");
  cmf_traj->add_option("--direction", direction, "e.g. 1,0,0")->required();
  auto* cmf_scan = cmf->add_subcommand("scan", "Canonical forms and metrics over many directions");
  cmf_scan->add_flag("--all", all_dirs, "Include non-primitive directions");
  for (auto* sub : {cmf_check, cmf_traj, cmf_scan}) sub->add_option("--cmf", cmf_path, "CMF JSON (default: bundled pi field)");
  for (auto* sub : {cmf_traj, cmf_scan}) sub->add_option("--start", start, "Start point, e.g. 1/2,1/2,1/2");
  auto* cluster = app.add_subcommand("cluster", "Validate and cluster a corpus");
  cluster->add_option("CORPUS", a, "Corpus JSON")->required();
  cluster->add_option("--out", out, "Also write clusters.json here");
  auto* report = app.add_subcommand("report", "Cluster a corpus and write certificates, summary and digest");
  report->add_option("CORPUS", a, "Corpus JSON")->required();
  report->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*eval) return cmd_eval(g, a, init, from);
    if (*delta) return cmd_metric(g, a, true);
    if (*rate) return cmd_metric(g, a, false);
    if (*canon) return cmd_canonicalize(a);
    if (*guess) return cmd_guess(g, term, start_index, terms, max_order, max_degree);
    if (*match) return cmd_match(g, a, b, constant, out);
    if (*verify) return cmd_verify(a);
    if (*cmf_check) return cmd_cmf_check(cmf_path);
    if (*cmf_traj) return cmd_cmf_trajectory(g, cmf_path, direction, start);
    if (*cmf_scan) return cmd_cmf_scan(g, cmf_path, start, all_dirs);
    if (*cluster) {
      CoboundaryGraph graph = run_corpus(g, a, false);
      std::cout << report_markdown(graph);
      if (!out.empty()) write_text(out, cluster_summary_json(graph));
      return kOk;
    }
    if (*report) {
      CoboundaryGraph graph = run_corpus(g, a, false);
      ReportFiles files = export_report(graph, out);
      std::cout << "wrote " << files.certificates.size() << " certificates, " << files.summary << ", " << files.digest
                << "\n";
      return kOk;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const MathError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerifyFailed;
  }
  return kInputError;
}
