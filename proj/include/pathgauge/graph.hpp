// SPDX-License-Identifier: Apache-2.0
//
// DAG network model: neurons with activation attributes, weighted edges and
// per-neuron biases, plus the structural queries shared by every module.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pathgauge {

using NeuronIndex = std::size_t;
using EdgeIndex = std::size_t;

enum class ActivationKind { input, relu, identity, kpool };

struct Activation {
  ActivationKind kind = ActivationKind::identity;
  int k = 0;  // only meaningful for kpool

  static constexpr Activation input() { return {ActivationKind::input, 0}; }
  static constexpr Activation relu() { return {ActivationKind::relu, 0}; }
  static constexpr Activation identity() { return {ActivationKind::identity, 0}; }
  static constexpr Activation kpool(int k) { return {ActivationKind::kpool, k}; }

  friend bool operator==(const Activation&, const Activation&) = default;
};

std::string to_string(Activation a);

struct NeuronSpec {
  std::string id;
  Activation activation;
};

struct EdgeSpec {
  std::string from;
  std::string to;
};

struct Edge {
  NeuronIndex from;
  NeuronIndex to;
};

/// Immutable neuron DAG.
///
/// Neurons are stored in ascending byte-wise id order, so a NeuronIndex
/// comparison is an id comparison. That order breaks ties in k-max-pooling
/// and fixes the order of inputs, outputs and antecedent sums. Edges are
/// sorted by (from, to).
///
/// Construction rejects duplicate ids, dangling edge endpoints and parallel
/// edges. Everything else (cycles, activation mismatches, pooling kernels) is
/// accepted and reported by validate(), so malformed networks can be
/// inspected.
class Architecture {
 public:
  Architecture() = default;
  Architecture(std::vector<NeuronSpec> neurons, std::vector<EdgeSpec> edges, std::string name = {});

  std::size_t size() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::string& name() const { return name_; }

  const std::string& id(NeuronIndex v) const { return ids_[v]; }
  Activation activation(NeuronIndex v) const { return activations_[v]; }
  std::optional<NeuronIndex> find(std::string_view id) const;
  /// Throws UnknownNeuron.
  NeuronIndex index_of(std::string_view id) const;

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeIndex e) const { return edges_[e]; }
  std::optional<EdgeIndex> find_edge(NeuronIndex from, NeuronIndex to) const;

  /// Incoming edge indices of v, ordered by ascending antecedent id.
  std::span<const EdgeIndex> incoming(NeuronIndex v) const { return incoming_[v]; }
  /// Outgoing edge indices of v, ordered by ascending successor id.
  std::span<const EdgeIndex> outgoing(NeuronIndex v) const { return outgoing_[v]; }

  /// Structural inputs (no antecedents) and outputs (no successors), ascending id.
  std::span<const NeuronIndex> inputs() const { return inputs_; }
  std::span<const NeuronIndex> outputs() const { return outputs_; }
  std::size_t input_dim() const { return inputs_.size(); }
  std::size_t output_dim() const { return outputs_.size(); }

  bool is_input(NeuronIndex v) const { return incoming_[v].empty(); }
  bool is_output(NeuronIndex v) const { return outgoing_[v].empty(); }
  bool is_hidden(NeuronIndex v) const { return !is_input(v) && !is_output(v); }

  /// Position of an input neuron inside the input vector, if v is an input.
  std::optional<std::size_t> input_position(NeuronIndex v) const;

  bool acyclic() const { return order_.has_value(); }
  /// Deterministic topological order (Kahn, smallest id first). Throws CyclicGraph.
  std::span<const NeuronIndex> order() const;

  std::vector<NeuronSpec> neuron_specs() const;
  std::vector<EdgeSpec> edge_specs() const;

 private:
  std::string name_;
  std::vector<std::string> ids_;
  std::vector<Activation> activations_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeIndex>> incoming_;
  std::vector<std::vector<EdgeIndex>> outgoing_;
  std::vector<NeuronIndex> inputs_;
  std::vector<NeuronIndex> outputs_;
  std::vector<std::size_t> input_position_;
  std::optional<std::vector<NeuronIndex>> order_;
};

/// Edge weights and biases bound to one Architecture by position: weights[e]
/// is the weight of arch.edge(e), biases[v] the bias of neuron v (entries of
/// input neurons are ignored and kept at 0).
struct Parameters {
  std::vector<double> weights;
  std::vector<double> biases;

  static Parameters zeros(const Architecture& arch);

  double weight(const Architecture& arch, std::string_view from, std::string_view to) const;
  void set_weight(const Architecture& arch, std::string_view from, std::string_view to, double w);
  double bias(const Architecture& arch, std::string_view id) const;
  void set_bias(const Architecture& arch, std::string_view id, double b);

  friend bool operator==(const Parameters&, const Parameters&) = default;
};

struct Network {
  Architecture arch;
  Parameters params;
};

struct Violation {
  std::string rule;
  std::string subject;  // neuron id or "from->to"
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const Architecture& arch, const Parameters* params = nullptr);
inline ValidationReport validate(const Architecture& arch, const Parameters& params) {
  return validate(arch, &params);
}

/// Throws InvalidArchitecture listing the first violation when validation fails.
void require_valid(const Architecture& arch, const Parameters* params = nullptr);
inline void require_valid(const Architecture& arch, const Parameters& params) {
  require_valid(arch, &params);
}

/// Kahn's algorithm with ascending-id tie breaking. Throws CyclicGraph.
std::vector<std::string> topological_order(const Architecture& arch);

/// Longest path length (in edges) from any input to each neuron.
std::vector<std::size_t> neuron_depths(const Architecture& arch);

/// Maximal length of a path in the graph.
std::size_t depth(const Architecture& arch);

struct PoolStats {
  std::size_t distinct_k = 0;   // P
  std::size_t max_kernel = 1;   // K
  std::size_t pool_layers = 0;  // M
  /// Pooling neurons fill whole depth levels and no edge jumps over such a
  /// level. Required for the sharpened bound constant.
  bool layered_pooling = true;
};

PoolStats pool_stats(const Architecture& arch);

/// G^{->v}: same inputs, v as single output, every neuron that cannot reach v
/// removed. Throws UnknownNeuron.
Architecture subgraph_to(const Architecture& arch, std::string_view v);

/// Parameters of `sub` copied from the matching entries of a supergraph.
Parameters restrict_parameters(const Architecture& super, const Parameters& params,
                               const Architecture& sub);

/// Incremental construction of a Network from ids.
class NetworkBuilder {
 public:
  explicit NetworkBuilder(std::string name = {}) : name_(std::move(name)) {}

  NetworkBuilder& input(std::string id);
  NetworkBuilder& neuron(std::string id, Activation activation, double bias = 0.0);
  NetworkBuilder& edge(std::string from, std::string to, double weight);

  Network build() const;

 private:
  std::string name_;
  std::vector<NeuronSpec> neurons_;
  std::vector<double> biases_;
  std::vector<EdgeSpec> edges_;
  std::vector<double> weights_;
};

}  // namespace pathgauge
