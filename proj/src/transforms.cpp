// SPDX-License-Identifier: Apache-2.0
#include "pathgauge/transforms.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pathgauge/errors.hpp"

namespace pathgauge {

Architecture pool_to_identity(const Architecture& arch) {
  auto neurons = arch.neuron_specs();
  for (auto& n : neurons) {
    if (n.activation.kind == ActivationKind::kpool) n.activation = Activation::identity();
  }
  return Architecture(std::move(neurons), arch.edge_specs(), arch.name());
}

BiasAbsorption absorb_biases(const Architecture& arch, const Parameters& params, bool force) {
  bool any = false;
  for (NeuronIndex v = 0; v < arch.size(); ++v) {
    if (arch.is_input(v)) continue;
    const bool pool = arch.activation(v).kind == ActivationKind::kpool;
    if (pool && params.biases[v] != 0.0) throw PoolBiasNonZero(arch.id(v));
    if (!pool && params.biases[v] != 0.0) any = true;
  }
  BiasAbsorption result;
  if (!any && !force) {
    result.net = {arch, params};
    return result;
  }

  // The new id must sort after every existing input so that it lands last
  // in the input vector; extending the largest input id does that.
  std::string bias_id = arch.input_dim() > 0 ? arch.id(arch.inputs().back()) : std::string();
  bias_id += ".bias";
  while (arch.find(bias_id)) bias_id += "_";

  NetworkBuilder builder(arch.name());
  for (NeuronIndex v = 0; v < arch.size(); ++v) {
    const bool pool = arch.activation(v).kind == ActivationKind::kpool;
    if (arch.is_input(v)) builder.input(arch.id(v));
    else builder.neuron(arch.id(v), arch.activation(v), pool ? params.biases[v] : 0.0);
  }
  builder.input(bias_id);
  for (EdgeIndex e = 0; e < arch.edge_count(); ++e)
    builder.edge(arch.id(arch.edge(e).from), arch.id(arch.edge(e).to), params.weights[e]);
  for (NeuronIndex v = 0; v < arch.size(); ++v) {
    if (arch.is_input(v) || arch.activation(v).kind == ActivationKind::kpool) continue;
    if (force || params.biases[v] != 0.0) builder.edge(bias_id, arch.id(v), params.biases[v]);
  }
  result.net = builder.build();
  result.bias_input = bias_id;
  result.bias_position = *result.net.arch.input_position(result.net.arch.index_of(bias_id));
  return result;
}

Network eliminate_identity_neurons(const Architecture& arch, const Parameters& params) {
  std::vector<NeuronIndex> targets;
  for (NeuronIndex v : arch.order()) {
    if (arch.is_hidden(v) && arch.activation(v).kind == ActivationKind::identity) {
      if (params.biases[v] != 0.0) throw BiasedIdentityNeuron(arch.id(v));
      targets.push_back(v);
    }
  }
  if (targets.empty()) return {arch, params};

  // Mutable adjacency keyed by neuron index: out[u][w] = weight.
  std::vector<std::map<NeuronIndex, double>> out(arch.size()), in(arch.size());
  for (EdgeIndex e = 0; e < arch.edge_count(); ++e) {
    const auto& edge = arch.edge(e);
    out[edge.from][edge.to] = params.weights[e];
    in[edge.to][edge.from] = params.weights[e];
  }

  std::vector<bool> removed(arch.size(), false);
  for (auto it = targets.rbegin(); it != targets.rend(); ++it) {
    const NeuronIndex v = *it;
    for (const auto& [w, unused] : out[v]) {
      if (arch.activation(w).kind != ActivationKind::kpool) continue;
      // A pool term b_w + v*theta stays a single term only if v has one
      // antecedent that does not already feed w.
      if (in[v].size() != 1 || out[in[v].begin()->first].count(w) != 0)
        throw IdentityFeedsPool(arch.id(v), arch.id(w));
    }
    for (const auto& [u, wuv] : in[v]) {
      for (const auto& [w, wvw] : out[v]) {
        out[u][w] += wuv * wvw;
        in[w][u] = out[u][w];
      }
      out[u].erase(v);
    }
    for (const auto& [w, unused] : out[v]) in[w].erase(v);
    in[v].clear();
    out[v].clear();
    removed[v] = true;
  }

  NetworkBuilder builder(arch.name());
  for (NeuronIndex v = 0; v < arch.size(); ++v) {
    if (removed[v]) continue;
    if (arch.is_input(v)) builder.input(arch.id(v));
    else builder.neuron(arch.id(v), arch.activation(v), params.biases[v]);
  }
  for (NeuronIndex u = 0; u < arch.size(); ++u) {
    for (const auto& [w, weight] : out[u]) builder.edge(arch.id(u), arch.id(w), weight);
  }
  return builder.build();
}

void PoolFragment::add_to(NetworkBuilder& builder) const {
  builder.neuron(neuron.id, neuron.activation, bias);
  for (std::size_t i = 0; i < edges.size(); ++i) builder.edge(edges[i].from, edges[i].to, weights[i]);
}

PoolFragment make_max_pool(const std::string& id, const std::vector<std::string>& antecedents,
                           int k) {
  if (antecedents.empty()) throw EmptyKernel();
  if (k < 1 || static_cast<std::size_t>(k) > antecedents.size())
    throw InvalidArchitecture("k must lie in 1..kernel size");
  PoolFragment f{{id, Activation::kpool(k)}, 0.0, {}, {}};
  for (const auto& a : antecedents) {
    f.edges.push_back({a, id});
    f.weights.push_back(1.0);
  }
  return f;
}

PoolFragment make_avg_pool(const std::string& id, const std::vector<std::string>& antecedents) {
  if (antecedents.empty()) throw EmptyKernel();
  PoolFragment f{{id, Activation::identity()}, 0.0, {}, {}};
  const double w = 1.0 / static_cast<double>(antecedents.size());
  for (const auto& a : antecedents) {
    f.edges.push_back({a, id});
    f.weights.push_back(w);
  }
  return f;
}

}  // namespace pathgauge
