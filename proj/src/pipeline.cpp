#include "pcf/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "pcf/expr.hpp"
#include "pcf/guess.hpp"
#include "pcf/serialize.hpp"
#include "pcf/terms.hpp"

namespace pcf {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

template <class F>
void parallel_for(std::size_t count, int jobs, F&& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count < 2) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  int threads = static_cast<int>(std::min<std::size_t>(count, static_cast<std::size_t>(jobs)));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t k; (k = next.fetch_add(1)) < count;) fn(k);
    });
  for (auto& th : pool) th.join();
}

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) out += ch;
  return out;
}

// "(4+pi)/pi" -> [[1,4],[1,0]] as a normalized integer Mobius matrix.
MatInt declared_matrix(const std::string& text, const std::string& constant) {
  RF f = parse_rf(text, constant);
  if (f.num().degree() > 1 || f.den().degree() > 1)
    throw InputError("'" + text + "' is not a Mobius image of " + constant);
  MatQ m = MatQ::of2(f.num().coeff(1), f.num().coeff(0), f.den().coeff(1), f.den().coeff(0));
  if (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) == 0) throw InputError("'" + text + "' does not depend on " + constant);
  return normalize_mobius(primitive_int(m));
}

FormulaKind parse_kind(const std::string& s) {
  if (s == "series") return FormulaKind::Series;
  if (s == "cf") return FormulaKind::CF;
  if (s == "pcf") return FormulaKind::Pcf;
  if (s == "recurrence") return FormulaKind::Recurrence;
  throw InputError("unknown kind '" + s + "' (expected series, cf, pcf or recurrence)");
}

// Runs fn and rewrites any InputError as "<path>: message".
template <class F>
auto at_path(const std::string& path, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string get_string(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw InputError(path + "." + key + ": missing");
  if (!j[key].is_string()) throw InputError(path + "." + key + ": expected a string");
  return j[key].get<std::string>();
}

// Structural identity of a record's payload, used to collapse duplicates.
std::string payload_key(const FormulaRecord& r) {
  std::string key = r.constant + "|" + to_string(r.kind) + "|" + std::to_string(r.start_index) + "|";
  switch (r.kind) {
    case FormulaKind::Series:
      return key + strip_spaces(r.term);
    case FormulaKind::Pcf:
      return key + parse_poly(r.a).str() + ";" + parse_poly(r.b).str();
    case FormulaKind::CF:
      return key + parse_rf(r.a).str() + ";" + parse_rf(r.b).str();
    case FormulaKind::Recurrence: {
      key += parse_poly(r.denominator).str();
      for (const auto& c : r.coefficients) key += ";" + parse_poly(c).str();
      return key;
    }
  }
  return key;
}

FormulaRecord parse_record(const json& j, const std::string& path) {
  if (!j.is_object()) throw InputError(path + ": expected an object");
  FormulaRecord r;
  r.id = get_string(j, "id", path);
  if (r.id.empty()) throw InputError(path + ".id: empty");
  r.constant = get_string(j, "constant", path);
  if (!is_known_constant(r.constant)) throw InputError(path + ".constant: unknown constant '" + r.constant + "'");
  r.kind = at_path(path + ".kind", [&] { return parse_kind(get_string(j, "kind", path)); });
  if (!j.contains("payload") || !j["payload"].is_object()) throw InputError(path + ".payload: missing or not an object");
  const json& p = j["payload"];
  std::string pp = path + ".payload";
  switch (r.kind) {
    case FormulaKind::Series:
      r.term = get_string(p, "term", pp);
      at_path(pp + ".term", [&] { return TermExpression(r.term).text(); });
      break;
    case FormulaKind::Pcf:
      r.a = get_string(p, "a", pp);
      r.b = get_string(p, "b", pp);
      at_path(pp + ".a", [&] { return parse_poly(r.a); });
      at_path(pp + ".b", [&] { return parse_poly(r.b); });
      break;
    case FormulaKind::CF:
      r.a = get_string(p, "a", pp);
      r.b = get_string(p, "b", pp);
      at_path(pp + ".a", [&] { return parse_rf(r.a); });
      at_path(pp + ".b", [&] { return parse_rf(r.b); });
      break;
    case FormulaKind::Recurrence: {
      if (!p.contains("coefficients") || !p["coefficients"].is_array() || p["coefficients"].empty())
        throw InputError(pp + ".coefficients: expected a non-empty array");
      for (std::size_t i = 0; i < p["coefficients"].size(); ++i) {
        std::string cp = pp + ".coefficients[" + std::to_string(i) + "]";
        if (!p["coefficients"][i].is_string()) throw InputError(cp + ": expected a string");
        r.coefficients.push_back(p["coefficients"][i].get<std::string>());
        at_path(cp, [&] { return parse_poly(r.coefficients.back()); });
      }
      if (p.contains("denominator")) {
        r.denominator = get_string(p, "denominator", pp);
        at_path(pp + ".denominator", [&] { return parse_poly(r.denominator); });
      }
      if (parse_poly(r.denominator).is_zero()) throw InputError(pp + ".denominator: zero");
      break;
    }
  }
  if (j.contains("start_index")) {
    if (!j["start_index"].is_number_integer()) throw InputError(path + ".start_index: expected an integer");
    r.start_index = j["start_index"].get<long>();
  } else {
    r.start_index = r.kind == FormulaKind::Series ? 0 : 1;
  }
  if (j.contains("declared_value") && !j["declared_value"].is_null()) {
    r.declared_value = get_string(j, "declared_value", path);
    at_path(path + ".declared_value", [&] { return declared_matrix(*r.declared_value, r.constant); });
  }
  if (j.contains("source")) {
    const json& s = j["source"];
    if (s.is_string()) {
      if (!s.get<std::string>().empty()) r.sources.push_back(s.get<std::string>());
    } else if (s.is_array()) {
      for (const auto& x : s) {
        if (!x.is_string()) throw InputError(path + ".source: expected strings");
        r.sources.push_back(x.get<std::string>());
      }
    } else {
      throw InputError(path + ".source: expected a string or an array of strings");
    }
  }
  return r;
}

CmfNodeSpec parse_cmf_spec(const json& j, const std::string& path) {
  if (!j.is_object()) throw InputError(path + ": expected an object");
  CmfNodeSpec s;
  s.id = get_string(j, "id", path);
  if (j.contains("cmf")) s.cmf = get_string(j, "cmf", path);
  if (!j.contains("direction") || !j["direction"].is_array()) throw InputError(path + ".direction: expected an array");
  for (const auto& x : j["direction"]) {
    if (!x.is_number_integer()) throw InputError(path + ".direction: expected integers");
    s.direction.push_back(x.get<long>());
  }
  if (!j.contains("start") || !j["start"].is_array()) throw InputError(path + ".start: expected an array");
  for (const auto& x : j["start"]) {
    if (!x.is_string()) throw InputError(path + ".start: expected rational strings");
    s.start.push_back(at_path(path + ".start", [&] { return parse_q(x.get<std::string>()); }));
  }
  if (s.start.size() != s.direction.size()) throw InputError(path + ": start and direction lengths differ");
  return s;
}

// Normalized integer form of a recurrence: integer coefficients with gcd 1 and a
// denominator with positive leading coefficient.
Recurrence normalize_recurrence(Recurrence r) {
  Int den_lcm = r.denom.denominator_lcm();
  for (const auto& c : r.coeffs) den_lcm = int_lcm(den_lcm, c.denominator_lcm());
  Int g = 0;
  auto absorb = [&](const Poly& p) {
    Poly scaled = p * Q(den_lcm);
    for (const auto& q : scaled.coeffs()) g = int_gcd(g, q.get_num());
  };
  absorb(r.denom);
  for (const auto& c : r.coeffs) absorb(c);
  Q scale = g == 0 ? Q(1) : Q(den_lcm) / Q(g);
  if (r.denom.lead() < 0) scale = -scale;
  r.denom = r.denom * scale;
  for (auto& c : r.coeffs) c = c * scale;
  return r;
}

long bits_for(long digits) { return digits_to_bits(digits) + 64; }

// Mobius matrix for a(0) + K given one for K.
MatInt add_a0(const MatInt& k, const Q& a0) {
  MatQ shiftm = MatQ::of2(Q(1), a0, Q(0), Q(1));
  return normalize_mobius(primitive_int(shiftm * k.map([](const Int& z) { return Q(z); })));
}

struct Identified {
  std::optional<MatInt> matrix;
  std::string reason;  // set when matrix is empty
};

Identified identify_value(const ApproxValue& L, const std::string& constant, long digits) {
  Identified out;
  IdentifyOptions io;
  io.max_digits = digits;
  try {
    auto id = identify_mobius(L, constant, io);
    if (id) {
      out.matrix = normalize_mobius(id->matrix);
      return out;
    }
  } catch (const PrecisionError& e) {
    out.reason = std::string("too few reliable digits: ") + e.what();
    return out;
  }
  // A rational limit has no Mobius representation; detect it directly.
  PslqOptions po;
  po.max_coeff_digits = 20;
  po.working_digits = std::min<long>(L.reliable_digits(), digits);
  try {
    auto rel = pslq({L.value, Real::from_long(1, L.value.prec())}, po);
    if (rel && rel->coefficients[0] != 0) {
      Q r = make_q(-rel->coefficients[1], rel->coefficients[0]);
      out.reason = "rational limit " + q_str(r);
      return out;
    }
  } catch (const PrecisionError&) {
  }
  out.reason = "no Mobius relation with " + constant + " found";
  return out;
}

Validation reject(const std::string& reason, const std::optional<ApproxValue>& L = std::nullopt) {
  Validation v;
  v.status = ValidationStatus::Rejected;
  v.reason = reason;
  if (L) v.numerics = L->value.str(40);
  return v;
}

std::string mobius_text(const MatInt& m, const std::string& c) {
  auto lin = [&](const Int& x, const Int& y) {
    return "(" + x.get_str() + "*" + c + (y < 0 ? " - " : " + ") + Int(abs(y)).get_str() + ")";
  };
  return lin(m(0, 0), m(0, 1)) + "/" + lin(m(1, 0), m(1, 1));
}

bool same_mobius(const MatInt& a, const MatInt& b) {
  auto q = [](const MatInt& m) { return m.map([](const Int& z) { return Q(z); }); };
  return projectively_equal(q(a), q(b));
}

// Value carried by the formula itself (series sum, a(0) + K of a cf/pcf, K of a
// recurrence) and the canonical PCF it reduces to before any root shift.
struct Reduced {
  int order = 0;
  Recurrence recurrence;
  std::optional<PCF> canonical;
  std::optional<ApproxValue> claimed;
  std::string failure;
};

ApproxValue raw_value(const RationalPCF& raw, const CanonicalResult& can, bool add_a0_term, long depth, long digits) {
  long bits = bits_for(digits);
  ApproxValue k = evaluate_limit(can.pcf, std::nullopt, depth, bits);
  if (!can.trace.value_map_valid) throw MathError("canonicalization does not carry a value map");
  ApproxValue out = k;
  out.value = mobius_apply(adjugate(can.trace.value_map), k.value);
  if (add_a0_term) out.value = out.value + Real::from_q(raw.a.eval(Q(0)), bits);
  return out;
}

Reduced reduce_series(const FormulaRecord& rec, const ValidateOptions& opts) {
  Reduced out;
  SeriesCanonical sc = canonicalize_series(rec.term, rec.start_index, opts);
  out.order = sc.order;
  out.recurrence = index_shift(sc.recurrence, rec.start_index);
  if (sc.order != 2) return out;
  // Position-indexed canonical form, before the root shift.
  out.canonical = to_pcf_canonical(out.recurrence).pcf;
  // The sum is read off a canonical form whose convergents are the partial sums. A
  // vanishing leading term makes that construction degenerate, so such terms are skipped.
  std::string why;
  for (long skip = 0; skip < 4 && !out.claimed; ++skip) {
    PCF pos = skip == 0 ? *out.canonical : to_pcf_canonical(index_shift(sc.recurrence, rec.start_index + skip)).pcf;
    auto s = eval_series_terms(rec.term, rec.start_index + skip, 8);
    try {
      SeriesInit si = series_initial_conditions(s.terms[0], s.terms[1], s.terms[2], pos.a, pos.b);
      long first = si.init.from_index == 1 ? 0 : 1;
      for (long N = first; N < 8; ++N)
        if (convergent(pos, N, si.init) != s.terms[static_cast<std::size_t>(N)])
          throw MathError("partial sums are not convergents of the canonical form");
      out.claimed = evaluate_limit(pos, si.init, opts.depth, bits_for(opts.digits));
    } catch (const MathError& e) {
      if (why.empty()) why = e.what();
    }
  }
  if (!out.claimed) out.failure = "cannot evaluate the series: " + why;
  return out;
}

Reduced reduce_formula(const FormulaRecord& rec, const ValidateOptions& opts) {
  if (rec.kind == FormulaKind::Series) return reduce_series(rec, opts);
  Reduced out;
  RationalPCF raw;
  bool with_a0 = true;
  if (rec.kind == FormulaKind::Recurrence) {
    Recurrence r;
    r.denom = parse_poly(rec.denominator);
    for (const auto& c : rec.coefficients) r.coeffs.push_back(parse_poly(c));
    r = index_shift(r, rec.start_index - 1);
    out.order = r.order();
    out.recurrence = r;
    if (out.order != 2) return out;
    raw = to_rational_pcf(r);
    with_a0 = false;
  } else {
    raw = {parse_rf(rec.a), parse_rf(rec.b)};
    if (rec.start_index != 1) raw = index_shift(raw, rec.start_index - 1);
    out.order = 2;
  }
  CanonicalResult can = to_pcf_canonical(raw);
  out.recurrence = to_recurrence(can.pcf);
  out.canonical = can.pcf;
  try {
    out.claimed = raw_value(raw, can, with_a0, opts.depth, opts.digits);
  } catch (const MathError& e) {
    out.failure = std::string("cannot evaluate the formula: ") + e.what();
  }
  return out;
}

std::string safe_name(const std::string& id) {
  std::string s;
  for (char ch : id) s += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.') ? ch : '_';
  return s;
}

std::string fixed4(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  std::string s = buf;
  if (s == "-0.0000") s = "0.0000";
  return s;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + p.string());
}

}  // namespace

std::string to_string(FormulaKind k) {
  switch (k) {
    case FormulaKind::Series: return "series";
    case FormulaKind::CF: return "cf";
    case FormulaKind::Pcf: return "pcf";
    case FormulaKind::Recurrence: return "recurrence";
  }
  return "?";
}

std::string to_string(ValidationStatus s) {
  switch (s) {
    case ValidationStatus::Accepted: return "accepted";
    case ValidationStatus::Unclusterable: return "unclusterable";
    case ValidationStatus::Rejected: return "rejected";
  }
  return "?";
}

Corpus parse_corpus_json(const std::string& text) {
  Corpus c;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return c;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("corpus is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("corpus: expected a JSON object");
  if (!j.contains("schema_version") || j["schema_version"] != kCorpusSchema)
    throw InputError("schema_version: expected " + std::to_string(kCorpusSchema));
  std::map<std::string, std::size_t> by_key;
  std::set<std::string> ids;
  if (j.contains("formulas")) {
    if (!j["formulas"].is_array()) throw InputError("formulas: expected an array");
    for (std::size_t i = 0; i < j["formulas"].size(); ++i) {
      std::string path = "formulas[" + std::to_string(i) + "]";
      FormulaRecord r = parse_record(j["formulas"][i], path);
      if (!ids.insert(r.id).second) throw InputError(path + ".id: duplicate id '" + r.id + "'");
      std::string key = payload_key(r);
      auto it = by_key.find(key);
      if (it != by_key.end()) {
        FormulaRecord& keep = c.formulas[it->second];
        for (const auto& s : r.sources)
          if (std::find(keep.sources.begin(), keep.sources.end(), s) == keep.sources.end()) keep.sources.push_back(s);
        c.merged[r.id] = keep.id;
        continue;
      }
      by_key[key] = c.formulas.size();
      c.formulas.push_back(std::move(r));
    }
  }
  if (j.contains("cmf_nodes")) {
    if (!j["cmf_nodes"].is_array()) throw InputError("cmf_nodes: expected an array");
    for (std::size_t i = 0; i < j["cmf_nodes"].size(); ++i) {
      std::string path = "cmf_nodes[" + std::to_string(i) + "]";
      CmfNodeSpec s = parse_cmf_spec(j["cmf_nodes"][i], path);
      if (!ids.insert(s.id).second) throw InputError(path + ".id: duplicate id '" + s.id + "'");
      c.cmf_nodes.push_back(std::move(s));
    }
  }
  if (j.contains("expected_clusters")) {
    const json& e = j["expected_clusters"];
    if (!e.is_object()) throw InputError("expected_clusters: expected an object");
    for (auto it = e.begin(); it != e.end(); ++it) {
      if (!it.value().is_array()) throw InputError("expected_clusters." + it.key() + ": expected an array");
      c.expected_clusters[it.key()] = it.value().get<std::vector<std::string>>();
    }
  }
  return c;
}

Corpus ingest_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read corpus file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_corpus_json(ss.str());
}

PCF shift_past_roots(const PCF& p, long* shift) {
  long s = last_positive_root(p.b);
  if (shift) *shift = s;
  return s > 0 ? index_shift(p, s) : p;
}

SeriesCanonical canonicalize_series(const std::string& term, long start_index, const ValidateOptions& opts) {
  auto seq = eval_series_terms(term, start_index, opts.guess_terms);
  GuessOptions go;
  go.max_order = opts.max_order;
  go.max_degree = opts.max_degree;
  auto g = guess_recurrence(seq, go);
  if (!g) throw MathError("no recurrence of order <= " + std::to_string(opts.max_order) + " and degree <= " +
                          std::to_string(opts.max_degree) + " fits the partial sums");
  SeriesCanonical out;
  out.recurrence = g->recurrence;
  out.order = g->order;
  if (g->order == 2) {
    PCF pos = to_pcf_canonical(index_shift(g->recurrence, start_index)).pcf;
    out.pcf = shift_past_roots(pos, &out.root_shift);
  }
  return out;
}

Validation validate_formula(const FormulaRecord& rec, const ValidateOptions& opts) {
  Reduced red;
  try {
    red = reduce_formula(rec, opts);
  } catch (const MathError& e) {
    return reject(e.what());
  } catch (const InputError& e) {
    return reject(e.what());
  }
  GraphNode node;
  node.id = rec.id;
  node.constant = rec.constant;
  node.source = NodeSource::Formula;
  node.order = red.order;
  node.sources = rec.sources;
  node.origin = to_string(rec.kind);

  if (red.order < 2) return reject("first-order recurrence; nothing to cluster");
  if (red.order > 2) {
    node.recurrence = normalize_recurrence(red.recurrence);
    Validation v;
    v.status = ValidationStatus::Unclusterable;
    v.reason = "order " + std::to_string(red.order) + " recurrence";
    v.node = std::move(node);
    return v;
  }
  if (!red.claimed) return reject(red.failure);

  Identified claimed = identify_value(*red.claimed, rec.constant, opts.digits);
  if (!claimed.matrix) return reject(claimed.reason, red.claimed);
  std::vector<std::string> warnings;
  if (rec.declared_value) {
    MatInt decl = declared_matrix(*rec.declared_value, rec.constant);
    if (!same_mobius(decl, *claimed.matrix))
      warnings.push_back("declared value " + *rec.declared_value + " disagrees with the evaluated " +
                         red.claimed->value.str(20) + " = " + mobius_text(*claimed.matrix, rec.constant));
  }

  node.pcf = shift_past_roots(*red.canonical);
  try {
    ApproxValue k = evaluate_limit(node.pcf, std::nullopt, opts.depth, bits_for(opts.digits));
    Identified nv = identify_value(cf_value(node.pcf, k), rec.constant, opts.digits);
    if (!nv.matrix) return reject("canonical form: " + nv.reason, cf_value(node.pcf, k));
    node.value = nv.matrix;
    node.metrics = compute_metrics(node.pcf, opts.metric_depth);
  } catch (const MathError& e) {
    return reject(std::string("canonical form: ") + e.what());
  }
  Validation v;
  v.status = ValidationStatus::Accepted;
  v.node = std::move(node);
  v.warnings = std::move(warnings);
  v.identified = claimed.matrix;
  return v;
}

GraphNode make_cmf_node(const CMF& cmf, const CmfNodeSpec& spec, const ValidateOptions& opts) {
  auto tm = trajectory_matrix(cmf, spec.start, spec.direction);
  auto cf = to_companion(tm.matrix);
  GraphNode node;
  node.id = spec.id;
  node.constant = cmf.constant.empty() ? "pi" : cmf.constant;
  node.source = NodeSource::Cmf;
  node.pcf = shift_past_roots(cf.canonical.pcf);
  node.origin = (cmf.name.empty() ? spec.cmf : cmf.name) + " direction " + direction_str(spec.direction) + " from " +
                point_str(spec.start);
  ApproxValue k = evaluate_limit(node.pcf, std::nullopt, opts.depth, bits_for(opts.digits));
  node.value = identify_value(cf_value(node.pcf, k), node.constant, opts.digits).matrix;
  node.metrics = compute_metrics(node.pcf, opts.metric_depth);
  return node;
}

PreparedCorpus prepare_corpus(const Corpus& corpus, const ValidateOptions& opts, int jobs) {
  std::vector<Validation> results(corpus.formulas.size());
  parallel_for(corpus.formulas.size(), jobs, [&](std::size_t i) { results[i] = validate_formula(corpus.formulas[i], opts); });
  PreparedCorpus out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].node && results[i].status != ValidationStatus::Rejected)
      out.nodes.push_back(*results[i].node);
    else
      out.rejected.emplace_back(corpus.formulas[i].id, results[i]);
  }
  std::vector<std::optional<GraphNode>> cmf_nodes(corpus.cmf_nodes.size());
  std::vector<std::string> errors(corpus.cmf_nodes.size());
  parallel_for(corpus.cmf_nodes.size(), jobs, [&](std::size_t i) {
    const CmfNodeSpec& s = corpus.cmf_nodes[i];
    try {
      CMF loaded;
      const CMF* cmf = &pi_cmf();
      if (s.cmf != "pi") {
        loaded = load_cmf(s.cmf);
        cmf = &loaded;
      }
      cmf_nodes[i] = make_cmf_node(*cmf, s, opts);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < cmf_nodes.size(); ++i) {
    if (cmf_nodes[i]) {
      out.nodes.push_back(*cmf_nodes[i]);
    } else {
      out.rejected.emplace_back(corpus.cmf_nodes[i].id, reject("CMF trajectory: " + errors[i]));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Clustering

double bin_center(int k) { return -1.0 + 0.05 * k; }

namespace {
double bin_coordinate(double delta) { return (std::clamp(delta, -1.0, 0.0) + 1.0) / 0.05; }
}  // namespace

int primary_bin(double delta) { return static_cast<int>(std::lround(bin_coordinate(delta))); }

std::vector<int> bins_of(double delta) {
  double x = bin_coordinate(delta);
  // A delta printed as an exact bin center should not straddle two bins through rounding.
  if (std::fabs(x - std::round(x)) < 1e-9) x = std::round(x);
  int lo = static_cast<int>(std::floor(x)), hi = static_cast<int>(std::ceil(x));
  if (lo == hi) return {lo};
  return {lo, hi};
}

std::vector<std::size_t> CoboundaryGraph::roots() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!parent[i]) out.push_back(i);
  return out;
}

std::size_t CoboundaryGraph::root_of(std::size_t i) const {
  while (parent[i]) i = edges[*parent[i]].parent;
  return i;
}

std::vector<std::size_t> CoboundaryGraph::tree(std::size_t r) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (root_of(i) == r) out.push_back(i);
  std::sort(out.begin(), out.end(), [&](std::size_t x, std::size_t y) { return nodes[x].id < nodes[y].id; });
  return out;
}

std::optional<std::size_t> CoboundaryGraph::find(const std::string& id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return i;
  return std::nullopt;
}

namespace {

// Shared K identification for all matches on one constant.
class IdentifierCache {
 public:
  IdentifierCache(const std::string& constant, long depth, long digits)
      : base_(default_identifier(constant, depth, digits)) {}

  void seed(const PCF& p, const MatInt& k) {
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(p.str(), k);
  }

  std::optional<MatInt> operator()(const PCF& p) {
    std::string key = p.str();
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    auto v = base_(p);
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(key, v);
    return v;
  }

 private:
  KIdentifier base_;
  std::mutex mu_;
  std::map<std::string, std::optional<MatInt>> cache_;
};

class Grower {
 public:
  Grower(CoboundaryGraph& g, const GrowOptions& opts) : g_(g), opts_(opts) {
    for (const auto& n : g_.nodes) {
      auto& cache = caches_[n.constant];
      if (!cache) cache = std::make_unique<IdentifierCache>(n.constant, opts.depth, opts.digits);
      if (n.value && n.clusterable()) cache->seed(n.pcf, add_a0(*n.value, -n.pcf.a.eval(Q(0))));
    }
  }

  // Hub loop over the given roots (already sorted by id).
  void hub_loop(std::vector<std::size_t> list) {
    while (list.size() >= 2) {
      std::size_t hub = list.front();
      std::vector<std::size_t> others(list.begin() + 1, list.end());
      std::vector<std::optional<MatchResult>> results(others.size());
      parallel_for(others.size(), opts_.jobs, [&](std::size_t k) {
        if (tried(hub, others[k])) return;
        results[k] = match(hub, others[k]);
      });
      std::vector<std::size_t> remaining;
      for (std::size_t k = 0; k < others.size(); ++k) {
        mark_tried(hub, others[k]);
        if (results[k] && results[k]->status == MatchStatus::Matched)
          attach(hub, others[k], *results[k]->certificate);
        else
          remaining.push_back(others[k]);
      }
      g_.nodes[hub].was_hub = true;
      list = std::move(remaining);
    }
  }

  std::optional<MatchResult> match(std::size_t a, std::size_t b) {
    const GraphNode &na = g_.nodes[a], &nb = g_.nodes[b];
    MatchInputs in{na.pcf, nb.pcf, na.metrics, nb.metrics};
    IdentifierCache* cache = caches_.at(na.constant).get();
    KIdentifier id = [cache](const PCF& p) { return (*cache)(p); };
    try {
      return match_pair(in, id, opts_.match);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  void attach(std::size_t parent, std::size_t child, const CoboundaryCertificate& c) {
    GraphEdge e;
    e.parent = parent;
    e.child = child;
    e.certificate = c;
    g_.edges.push_back(std::move(e));
    g_.parent[child] = g_.edges.size() - 1;
  }

  bool tried(std::size_t a, std::size_t b) const { return tried_.count(key(a, b)) > 0; }
  void mark_tried(std::size_t a, std::size_t b) { tried_.insert(key(a, b)); }

 private:
  static std::pair<std::size_t, std::size_t> key(std::size_t a, std::size_t b) { return {std::min(a, b), std::max(a, b)}; }

  CoboundaryGraph& g_;
  const GrowOptions& opts_;
  std::map<std::string, std::unique_ptr<IdentifierCache>> caches_;
  std::set<std::pair<std::size_t, std::size_t>> tried_;
};

}  // namespace

CoboundaryGraph grow_coboundary_graph(std::vector<GraphNode> nodes, const GrowOptions& opts) {
  std::stable_sort(nodes.begin(), nodes.end(), [](const GraphNode& a, const GraphNode& b) { return a.id < b.id; });
  CoboundaryGraph g;
  g.nodes = std::move(nodes);
  g.parent.assign(g.nodes.size(), std::nullopt);
  Grower grow(g, opts);

  std::set<std::string> constants;
  for (const auto& n : g.nodes) constants.insert(n.constant);

  auto formula_roots = [&](const std::string& constant, auto&& in_bin) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const GraphNode& n = g.nodes[i];
      if (n.constant != constant || n.source != NodeSource::Formula || !n.clusterable() || g.parent[i]) continue;
      if (in_bin(n.metrics.delta.delta)) out.push_back(i);
    }
    return out;
  };

  for (const auto& constant : constants) {
    // Nearest bin first, then every bin a root still touches.
    for (int k = 0; k < kBinCount; ++k)
      grow.hub_loop(formula_roots(constant, [k](double d) { return primary_bin(d) == k; }));
    for (int k = 0; k < kBinCount; ++k)
      grow.hub_loop(formula_roots(constant, [k](double d) {
        auto b = bins_of(d);
        return std::find(b.begin(), b.end(), k) != b.end();
      }));

    // Remaining formula roots against the CMF nodes sharing a bin with them.
    std::vector<std::size_t> cmf;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      if (g.nodes[i].constant == constant && g.nodes[i].source == NodeSource::Cmf) cmf.push_back(i);
    for (std::size_t r : formula_roots(constant, [](double) { return true; })) {
      std::vector<int> rb = bins_of(g.nodes[r].metrics.delta.delta);
      int rp = primary_bin(g.nodes[r].metrics.delta.delta);
      std::vector<std::size_t> order;
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t c : cmf) {
          auto cb = bins_of(g.nodes[c].metrics.delta.delta);
          bool has_primary = std::find(cb.begin(), cb.end(), rp) != cb.end();
          bool shares = false;
          for (int b : cb) shares = shares || std::find(rb.begin(), rb.end(), b) != rb.end();
          if ((pass == 0 && has_primary) || (pass == 1 && shares && !has_primary)) order.push_back(c);
        }
      std::vector<std::optional<MatchResult>> results(order.size());
      parallel_for(order.size(), opts.jobs, [&](std::size_t k) { results[k] = grow.match(order[k], r); });
      for (std::size_t k = 0; k < order.size(); ++k)
        if (results[k] && results[k]->status == MatchStatus::Matched) {
          grow.attach(order[k], r, *results[k]->certificate);
          break;
        }
    }
  }

  // Higher-order recurrences only join through exact equality.
  std::map<std::string, std::size_t> first_seen;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const GraphNode& n = g.nodes[i];
    if (n.clusterable() || !n.recurrence) continue;
    std::string key = n.constant + "|" + n.recurrence->str();
    auto [it, fresh] = first_seen.emplace(key, i);
    if (fresh) continue;
    GraphEdge e;
    e.parent = it->second;
    e.child = i;
    e.kind = "structural";
    g.edges.push_back(std::move(e));
    g.parent[i] = g.edges.size() - 1;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

std::string certificate_file(const CoboundaryGraph& g, const GraphEdge& e) {
  return safe_name(g.nodes[e.parent].id) + "__" + safe_name(g.nodes[e.child].id) + ".json";
}

std::vector<std::size_t> sorted_roots(const CoboundaryGraph& g) {
  auto roots = g.roots();
  std::sort(roots.begin(), roots.end(), [&](std::size_t a, std::size_t b) {
    const GraphNode &x = g.nodes[a], &y = g.nodes[b];
    if (x.constant != y.constant) return x.constant < y.constant;
    if (x.source != y.source) return x.source == NodeSource::Cmf;
    return x.id < y.id;
  });
  return roots;
}

std::size_t canonical_forms(const CoboundaryGraph& g, const std::vector<std::size_t>& members) {
  std::set<std::string> forms;
  for (std::size_t i : members) {
    const GraphNode& n = g.nodes[i];
    if (n.source != NodeSource::Formula) continue;
    forms.insert(n.clusterable() ? n.pcf.str() : n.recurrence ? n.recurrence->str() : n.id);
  }
  return forms.size();
}

}  // namespace

std::string cluster_summary_json(const CoboundaryGraph& g) {
  ojson doc;
  doc["schema_version"] = kCertificateSchema;
  doc["clusters"] = ojson::array();
  for (std::size_t r : sorted_roots(g)) {
    const GraphNode& root = g.nodes[r];
    auto members = g.tree(r);
    ojson c;
    c["root"] = root.id;
    c["constant"] = root.constant;
    c["cmf_attachment"] = root.source == NodeSource::Cmf ? ojson(root.origin) : ojson(nullptr);
    c["canonical_pcf"] = root.clusterable() ? ojson(pcf_to_text(root.pcf)) : ojson(nullptr);
    c["order"] = root.order;
    if (root.clusterable() && root.metrics.delta.defined)
      c["delta"] = fixed4(root.metrics.delta.delta);
    else
      c["delta"] = nullptr;
    c["rate"] = root.clusterable() ? ojson(fixed4(root.metrics.rate.rate)) : ojson(nullptr);
    c["canonical_forms"] = canonical_forms(g, members);
    ojson ids = ojson::array();
    for (std::size_t m : members)
      if (g.nodes[m].source == NodeSource::Formula) ids.push_back(g.nodes[m].id);
    c["formulas"] = ids.size();
    c["members"] = ids;
    std::vector<std::pair<std::string, ojson>> edges;
    for (const auto& e : g.edges) {
      if (g.root_of(e.child) != r) continue;
      ojson je;
      je["parent"] = g.nodes[e.parent].id;
      je["child"] = g.nodes[e.child].id;
      je["kind"] = e.kind;
      je["certificate"] = e.certificate ? ojson("certificates/" + certificate_file(g, e)) : ojson(nullptr);
      edges.emplace_back(g.nodes[e.child].id, je);
    }
    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    c["edges"] = ojson::array();
    for (auto& e : edges) c["edges"].push_back(std::move(e.second));
    doc["clusters"].push_back(std::move(c));
  }
  return doc.dump(1) + "\n";
}

std::string report_markdown(const CoboundaryGraph& g) {
  std::ostringstream md;
  md << "# Coboundary clusters\n\n";
  auto roots = sorted_roots(g);
  std::size_t multi = 0;
  for (std::size_t r : roots) multi += g.tree(r).size() > 1;
  md << g.nodes.size() << " nodes, " << g.edges.size() << " edges, " << roots.size() << " trees (" << multi
     << " with more than one node).\n\n";
  if (roots.empty()) return md.str();
  md << "| root | constant | delta | rate | canonical forms | members |\n";
  md << "|---|---|---|---|---|---|\n";
  for (std::size_t r : roots) {
    const GraphNode& root = g.nodes[r];
    auto members = g.tree(r);
    std::string ids;
    for (std::size_t m : members) {
      if (g.nodes[m].source != NodeSource::Formula) continue;
      ids += (ids.empty() ? "" : ", ") + g.nodes[m].id;
    }
    std::string delta = root.clusterable() && root.metrics.delta.defined ? fixed4(root.metrics.delta.delta) : "n/a";
    std::string rate = root.clusterable() ? fixed4(root.metrics.rate.rate) : "n/a";
    md << "| " << root.id << " | " << root.constant << " | " << delta << " | " << rate << " | "
       << canonical_forms(g, members) << " | " << ids << " |\n";
  }
  md << "\n## Trees\n";
  for (std::size_t r : roots) {
    auto members = g.tree(r);
    if (members.size() < 2) continue;
    const GraphNode& root = g.nodes[r];
    md << "\n### " << root.id << "\n\n";
    if (root.source == NodeSource::Cmf) md << "CMF trajectory: " << root.origin << "\n\n";
    md << "Root form: `" << (root.clusterable() ? pcf_to_text(root.pcf) : root.recurrence->str()) << "`\n\n";
    std::vector<std::string> lines;
    for (const auto& e : g.edges) {
      if (g.root_of(e.child) != r) continue;
      std::string line = "- " + g.nodes[e.parent].id + " -> " + g.nodes[e.child].id;
      if (e.certificate)
        line += " (fold " + std::to_string(e.certificate->fold_a) + "/" + std::to_string(e.certificate->fold_b) +
                ", p_A = " + e.certificate->p_a.str() + ", p_B = " + e.certificate->p_b.str() + ")";
      else
        line += " (" + e.kind + ")";
      lines.push_back(line);
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) md << l << "\n";
  }
  return md.str();
}

ReportFiles export_report(const CoboundaryGraph& g, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::path root(dir);
  fs::create_directories(root / "certificates");
  ReportFiles out;
  for (const auto& e : g.edges) {
    if (!e.certificate) continue;
    fs::path p = root / "certificates" / certificate_file(g, e);
    write_file(p, certificate_to_json(*e.certificate, g.nodes[e.parent].id, g.nodes[e.child].id));
    out.certificates.push_back(p.string());
  }
  std::sort(out.certificates.begin(), out.certificates.end());
  out.summary = (root / "clusters.json").string();
  write_file(out.summary, cluster_summary_json(g));
  out.digest = (root / "report.md").string();
  write_file(out.digest, report_markdown(g));
  return out;
}

}  // namespace pcf
