#include "pcf/serialize.hpp"

#include "json.hpp"
#include "pcf/expr.hpp"

namespace pcf {

namespace {

using json = nlohmann::ordered_json;

json pcf_json(const PCF& p) { return json{{"a", p.a.str()}, {"b", p.b.str()}}; }

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw InputError("certificate: missing field " + path + key);
  return j.at(key);
}

std::string text_field(const json& j, const char* key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_string()) throw InputError("certificate: field " + path + key + " must be a string");
  return v.get<std::string>();
}

Poly poly_field(const json& j, const char* key, const std::string& path) {
  try {
    return parse_poly(text_field(j, key, path));
  } catch (const InputError& e) {
    throw InputError("certificate: field " + path + key + ": " + e.what());
  }
}

PCF pcf_field(const json& j, const char* key, const std::string& path) {
  const json& v = field(j, key, path);
  std::string p = path + key + ".";
  return PCF{poly_field(v, "a", p), poly_field(v, "b", p)};
}

long int_field(const json& j, const char* key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number_integer()) throw InputError("certificate: field " + path + key + " must be an integer");
  return v.get<long>();
}

}  // namespace

std::string pcf_to_text(const PCF& p) { return "PCF(" + p.a.str() + "; " + p.b.str() + ")"; }

std::string certificate_to_json(const CoboundaryCertificate& c, const std::string& id_a, const std::string& id_b) {
  json u = json::array();
  for (std::size_t i = 0; i < c.U.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < c.U.cols(); ++j) row.push_back(c.U(i, j).str());
    u.push_back(row);
  }
  json doc{{"schema_version", kCertificateSchema},
           {"kind", "coboundary"},
           {"identity", "p_a(n) A(n) U(n+1) = p_b(n) U(n) B(n)"},
           {"a", {{"id", id_a}, {"source", pcf_json(c.source_a)}, {"fold", c.fold_a}, {"shift", c.shift_a},
                  {"pcf", pcf_json(c.pcf_a)}}},
           {"b", {{"id", id_b}, {"source", pcf_json(c.source_b)}, {"fold", c.fold_b}, {"shift", c.shift_b},
                  {"pcf", pcf_json(c.pcf_b)}}},
           {"U", u},
           {"p_a", c.p_a.str()},
           {"p_b", c.p_b.str()},
           {"hash", c.hash}};
  return doc.dump(1) + "\n";
}

CertificateDocument certificate_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("certificate is not valid JSON: ") + e.what());
  }
  if (int_field(j, "schema_version", "") != kCertificateSchema)
    throw InputError("certificate: unsupported schema_version");
  CertificateDocument d;
  CoboundaryCertificate& c = d.certificate;
  const json& a = field(j, "a", "");
  const json& b = field(j, "b", "");
  d.id_a = text_field(a, "id", "a.");
  d.id_b = text_field(b, "id", "b.");
  c.source_a = pcf_field(a, "source", "a.");
  c.source_b = pcf_field(b, "source", "b.");
  c.pcf_a = pcf_field(a, "pcf", "a.");
  c.pcf_b = pcf_field(b, "pcf", "b.");
  c.fold_a = static_cast<int>(int_field(a, "fold", "a."));
  c.fold_b = static_cast<int>(int_field(b, "fold", "b."));
  c.shift_a = int_field(a, "shift", "a.");
  c.shift_b = int_field(b, "shift", "b.");
  if (c.fold_a < 1 || c.fold_b < 1) throw InputError("certificate: folds must be positive");
  const json& u = field(j, "U", "");
  if (!u.is_array() || u.size() != 2) throw InputError("certificate: U must be a 2x2 array");
  c.U = MatPoly(2, 2);
  for (std::size_t r = 0; r < 2; ++r) {
    if (!u[r].is_array() || u[r].size() != 2) throw InputError("certificate: U must be a 2x2 array");
    for (std::size_t k = 0; k < 2; ++k) {
      if (!u[r][k].is_string()) throw InputError("certificate: U entries must be strings");
      try {
        c.U(r, k) = parse_poly(u[r][k].get<std::string>());
      } catch (const InputError& e) {
        throw InputError("certificate: field U[" + std::to_string(r) + "][" + std::to_string(k) + "]: " + e.what());
      }
    }
  }
  c.p_a = poly_field(j, "p_a", "");
  c.p_b = poly_field(j, "p_b", "");
  c.hash = text_field(j, "hash", "");
  return d;
}

}  // namespace pcf
