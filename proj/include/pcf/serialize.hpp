#pragma once

#include <string>

#include "pcf/coboundary.hpp"

namespace pcf {

inline constexpr int kCertificateSchema = 1;

// Self-contained certificate document: the source PCFs, folds, shifts, U, the external
// polynomials and the hash. Polynomials are written in the expression grammar.
std::string certificate_to_json(const CoboundaryCertificate& c, const std::string& id_a, const std::string& id_b);

struct CertificateDocument {
  std::string id_a, id_b;
  CoboundaryCertificate certificate;
};
// Throws InputError naming the offending field.
CertificateDocument certificate_from_json(const std::string& text);

std::string pcf_to_text(const PCF& p);  // "PCF(a; b)" in the parser's grammar

}  // namespace pcf
