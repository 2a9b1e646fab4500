// SPDX-License-Identifier: Apache-2.0
//
// Neuron-by-neuron evaluation of a network.
//
// relu/identity neurons compute rho(b_v + sum_u u * theta_{u->v}) with the
// sum taken in ascending antecedent id order. A kpool(k) neuron returns the
// k-th largest of the per-antecedent terms b_v + u * theta_{u->v}.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pathgauge/graph.hpp"
#include "pathgauge/matrix.hpp"

namespace pathgauge {

struct EvaluationTrace {
  std::vector<double> values;                   // per neuron
  std::vector<std::uint8_t> edge_activations;   // per edge, a_{u->v}
  std::vector<std::uint8_t> neuron_activations; // per neuron, a_v
};

/// Output vector ordered by output id. Throws DimensionMismatch.
std::vector<double> realize(const Architecture& arch, const Parameters& params,
                            std::span<const double> x);

/// realize() plus edge and neuron activations. For a kpool neuron the
/// activated edge comes from the smallest-id antecedent whose term equals
/// the pooled value.
EvaluationTrace trace(const Architecture& arch, const Parameters& params,
                      std::span<const double> x);

/// Row-wise realize(). Rows are split across `threads` workers (0 means
/// default_thread_count()); the result does not depend on the split.
Matrix batch_realize(const Architecture& arch, const Parameters& params, const Matrix& x,
                     unsigned threads = 0);

/// PATHGAUGE_THREADS if set to a positive value, hardware concurrency otherwise.
unsigned default_thread_count();

}  // namespace pathgauge
