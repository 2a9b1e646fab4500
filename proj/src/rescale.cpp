// SPDX-License-Identifier: Apache-2.0
#include "pathgauge/rescale.hpp"

#include <cmath>

#include "pathgauge/errors.hpp"
#include "pathgauge/norms.hpp"

namespace pathgauge {
namespace {

double incoming_with_bias_norm(const Architecture& arch, const Parameters& params, NeuronIndex v,
                               double q) {
  std::vector<double> coords;
  for (EdgeIndex e : arch.incoming(v)) coords.push_back(params.weights[e]);
  coords.push_back(params.biases[v]);
  return lq_norm(coords, q);
}

}  // namespace

NormalizationOutcome normalize(const Architecture& arch, const Parameters& params, double q) {
  if (!(q > 0.0)) throw InvalidNormSpec("q must lie in (0, inf]");
  require_valid(arch, params);
  NormalizationOutcome outcome{params, {}, {}};
  Parameters& p = outcome.params;
  for (NeuronIndex v : arch.order()) {
    if (!arch.is_hidden(v)) continue;
    const double lambda = incoming_with_bias_norm(arch, p, v, q);
    outcome.scales[arch.id(v)] = lambda;
    if (lambda == 0.0) {
      for (EdgeIndex e : arch.outgoing(v)) p.weights[e] = 0.0;
      outcome.zero_neurons.push_back(arch.id(v));
      continue;
    }
    for (EdgeIndex e : arch.incoming(v)) p.weights[e] /= lambda;
    p.biases[v] /= lambda;
    for (EdgeIndex e : arch.outgoing(v)) p.weights[e] *= lambda;
  }
  return outcome;
}

bool is_normalized(const Architecture& arch, const Parameters& params, double q, double tol) {
  require_valid(arch, params);
  const auto lifted = subgraph_path_norms(arch, params, q);
  for (NeuronIndex v = 0; v < arch.size(); ++v) {
    if (!arch.is_hidden(v)) continue;
    const double local = incoming_with_bias_norm(arch, params, v, q);
    if (std::abs(local - lifted[v]) > tol) return false;
    if (std::abs(local) <= tol) {
      for (EdgeIndex e : arch.outgoing(v))
        if (params.weights[e] != 0.0) return false;
    } else if (std::abs(local - 1.0) > tol) {
      return false;
    }
  }
  return true;
}

Parameters apply_rescaling(const Architecture& arch, const Parameters& params, std::string_view id,
                           double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw NonPositiveScale();
  const NeuronIndex v = arch.index_of(id);
  if (!arch.is_hidden(v)) throw NotHiddenNeuron(std::string(id));
  Parameters out = params;
  for (EdgeIndex e : arch.incoming(v)) out.weights[e] *= lambda;
  out.biases[v] *= lambda;
  for (EdgeIndex e : arch.outgoing(v)) out.weights[e] /= lambda;
  return out;
}

}  // namespace pathgauge
