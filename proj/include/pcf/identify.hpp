#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcf/matrix.hpp"
#include "pcf/recurrence.hpp"

namespace pcf {

// Shipped constants: "pi", "e", "zeta3", "catalan".
struct ConstantRef {
  std::string name;
  long digits_available = 0;
};

const std::vector<std::string>& known_constants();
bool is_known_constant(const std::string& name);

// Directory holding constants/, cmf/ and corpus/. PCF_DATA_DIR in the environment
// overrides the build-time location.
std::string data_dir();

// Loads (once) and checksum-verifies the digit file. Throws InputError for an unknown
// name and std::runtime_error for a checksum mismatch or unreadable file.
ConstantRef constant_ref(const std::string& name);
// Throws PrecisionError when more digits are requested than shipped.
ApproxValue constant_value(const std::string& name, long precision_bits);

struct IntegerRelation {
  std::vector<Int> coefficients;
  Real residual;
};

struct PslqOptions {
  long max_coeff_digits = 30;
  // Decimal digits the inputs are trusted to; 0 means all of their binary precision.
  long working_digits = 0;
  long max_iterations = 100000;
};

// Throws PrecisionError when working digits < 10 + n * max_coeff_digits.
std::optional<IntegerRelation> pslq(const std::vector<Real>& xs, const PslqOptions& opts = {});

struct MobiusIdentification {
  MatInt matrix;  // L = (m00 c + m01) / (m10 c + m11)
  std::string constant;
  long verified_digits = 0;
};

struct IdentifyOptions {
  long max_coeff_digits = 30;
  long min_digits = 100;
  long max_digits = 250;
};

// Normalize: gcd 1 and first nonzero entry of the bottom row positive.
MatInt normalize_mobius(const MatInt& m);

// Throws PrecisionError when L carries fewer than min_digits reliable digits.
std::optional<MobiusIdentification> identify_mobius(const ApproxValue& L, const std::string& constant,
                                                    const IdentifyOptions& opts = {});

}  // namespace pcf
