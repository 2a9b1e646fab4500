// SPDX-License-Identifier: Apache-2.0
//
// Graph rewrites that keep the realized function and the path-norms.
#pragma once

#include <string>
#include <vector>

#include "pathgauge/graph.hpp"

namespace pathgauge {

/// Same neurons and edges, every kpool activation replaced by identity.
Architecture pool_to_identity(const Architecture& arch);

struct BiasAbsorption {
  Network net;
  /// Id of the constant-one input neuron; empty when nothing was absorbed.
  std::string bias_input;
  /// Position of bias_input in the new input vector (always the last one):
  /// evaluate the new network on x with 1 appended.
  std::size_t bias_position = 0;
  bool absorbed() const { return !bias_input.empty(); }
};

/// Moves every non-pool bias onto an edge from a new constant-one input
/// neuron. Without `force`, only nonzero biases get an edge and a bias-free
/// network is returned unchanged; with `force`, every non-input non-pool
/// neuron gets an edge (weight b_v, possibly 0).
///
/// Throws PoolBiasNonZero when a k-max-pooling neuron has a nonzero bias.
BiasAbsorption absorb_biases(const Architecture& arch, const Parameters& params,
                             bool force = false);

/// Removes every hidden identity neuron v, adding theta_{u->v} * theta_{v->w}
/// onto edge u->w (created if absent) for each u in ant(v), w in suc(v).
/// Neurons are folded in reverse topological order.
///
/// Throws BiasedIdentityNeuron for a hidden identity neuron with b_v != 0,
/// and IdentityFeedsPool when the fold would merge or reweight terms of a
/// k-max-pooling successor (the pooled value would change).
Network eliminate_identity_neurons(const Architecture& arch, const Parameters& params);

/// Neuron, edges and parameters encoding one pooling unit.
struct PoolFragment {
  NeuronSpec neuron;
  double bias = 0.0;
  std::vector<EdgeSpec> edges;
  std::vector<double> weights;

  /// Adds the fragment to a builder; antecedents must already be declared.
  void add_to(NetworkBuilder& builder) const;
};

/// Classical max-pooling for k = 1: kpool(k), unit weights, zero bias.
/// Throws EmptyKernel.
PoolFragment make_max_pool(const std::string& id, const std::vector<std::string>& antecedents,
                           int k = 1);

/// Average pooling: identity, weights 1/|ant|, zero bias. Throws EmptyKernel.
PoolFragment make_avg_pool(const std::string& id, const std::vector<std::string>& antecedents);

}  // namespace pathgauge
