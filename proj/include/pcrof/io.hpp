#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "pcrof/pcr.hpp"

// JSON instance and report documents. An instance carries a domain (a
// list of boxes), the data either as value-carrying piece lists or as a
// dense per-grid-cell array, and alpha. Reports are versioned JSON with
// an instance digest so batch outputs are self-describing.

namespace pcrof {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InstanceDocument {
  int dimension = 0;
  double alpha = 1.0;
  PcrPieces f;
};

/// Parses and validates an instance. Diagnostics name the offending
/// field, for example "domain box 1: hi < lo on axis 0".
InstanceDocument parse_instance(const std::string& text);

/// Canonical serialized form: normalized level sets, sorted keys, two
/// space indentation. parse(serialize(doc)) reproduces doc.
std::string serialize_instance(const InstanceDocument& doc);

/// FNV-1a 64-bit digest of the canonical serialized form, as fixed-width
/// hex. Whitespace and piece ordering of the source text do not matter.
std::string instance_digest(const InstanceDocument& doc);

/// Cells (as per-axis [lo,hi] pairs) and values of a PCR function.
nlohmann::ordered_json function_to_json(const PcrFunction& u);

/// Report skeleton: schema version, command echo, instance digest.
nlohmann::ordered_json make_report(const std::string& command,
                                   const std::string& digest);

}  // namespace pcrof
