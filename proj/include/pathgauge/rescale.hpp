// SPDX-License-Identifier: Apache-2.0
//
// Rescaling symmetries of positively homogeneous networks and the
// normalization that picks a canonical representative per function.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "pathgauge/graph.hpp"

namespace pathgauge {

struct NormalizationOutcome {
  Parameters params;
  std::map<std::string, double> scales;  // lambda_v per hidden neuron
  std::vector<std::string> zero_neurons;
};

/// Visits hidden neurons in topological order. Each one gets
/// lambda_v = ||(theta^{->v}; b_v)||_q; incoming weights and bias are divided
/// by lambda_v and outgoing weights multiplied by it. lambda_v == 0 (exactly)
/// zeroes the outgoing weights instead. q lies in (0, inf].
///
/// The result realizes the same function and has the same path-lifting.
NormalizationOutcome normalize(const Architecture& arch, const Parameters& params, double q);

/// Every hidden neuron has ||Phi^{->v}||_q == ||(theta^{->v}; b_v)||_q in {0, 1}
/// (within `tol`), with zero outgoing weights when that value is 0.
bool is_normalized(const Architecture& arch, const Parameters& params, double q,
                   double tol = 1e-9);

/// Incoming weights and bias of v times lambda, outgoing weights divided by
/// lambda. Throws NonPositiveScale, NotHiddenNeuron.
Parameters apply_rescaling(const Architecture& arch, const Parameters& params, std::string_view v,
                           double lambda);

}  // namespace pathgauge
