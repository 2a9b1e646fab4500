// SPDX-License-Identifier: Apache-2.0
//
// Network files, CSV datasets and the command-line entry point.
//
// Network file (JSON):
//   {
//     "name": "optional",
//     "neurons": [{"id": "u", "activation": "input"},
//                 {"id": "v", "activation": "kpool", "k": 1}, ...],
//     "edges":   [{"from": "u", "to": "v", "weight": 1.0}, ...],
//     "biases":  {"v": 0.0, ...}
//   }
// activation is one of input, relu, identity, kpool. Biases missing from the
// map are 0; input neurons must not appear there.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pathgauge/errors.hpp"
#include "pathgauge/graph.hpp"
#include "pathgauge/matrix.hpp"

namespace pathgauge {

/// A network file parsed fine but describes an invalid network.
class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Throws ParseError; ValidationError too when `require_valid` is set.
Network parse_network(const std::string& text, bool require_valid = true);
Network load_network(const std::string& path, bool require_valid = true);

std::string dump_network(const Network& net);
void save_network(const Network& net, const std::string& path);

struct Dataset {
  Matrix x;
  std::vector<long> labels;  // 1-based; empty when the file carries none
  bool has_labels() const { return !labels.empty(); }
};

/// CSV with one sample per row: d_in numeric columns, optionally followed by
/// an integer label column. A non-numeric first row is a header; a header
/// whose last column is "label" marks the label column. Without a header the
/// label column is inferred from the column count. Throws ParseError.
Dataset parse_dataset(const std::string& text, std::size_t d_in);
Dataset load_dataset(const std::string& path, std::size_t d_in);

std::string read_file(const std::string& path);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// Runs one command line (argv[0] is the program name). The structured
/// report goes to `out`, the human summary and diagnostics to `err`.
/// Exit codes: 0 success, 1 validation or check failure, 2 usage error.
int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace pathgauge
