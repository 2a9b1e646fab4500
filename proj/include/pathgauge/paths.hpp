// SPDX-License-Identifier: Apache-2.0
//
// Brute-force path machinery: explicit enumeration of every path ending at
// an output neuron, the path-lifting Phi, the path-activation matrix A, and
// the reconstruction of outputs from them. Exponential in depth; this is the
// ground truth the fast routes in norms.hpp are checked against.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pathgauge/graph.hpp"

namespace pathgauge {

inline constexpr std::size_t kDefaultPathCap = 1'000'000;

struct Path {
  std::vector<NeuronIndex> neurons;  // v_0 -> ... -> v_d

  std::size_t length() const { return neurons.size() - 1; }
  NeuronIndex start() const { return neurons.front(); }
  NeuronIndex end() const { return neurons.back(); }

  friend bool operator==(const Path&, const Path&) = default;
};

/// "a->b->c".
std::string to_string(const Architecture& arch, const Path& p);

/// Canonical order: end neuron id, then length, then neuron ids lexicographically.
bool canonical_less(const Path& a, const Path& b);

/// Number of paths ending at v for every neuron: 1 + sum over antecedents.
/// Saturates at +inf instead of overflowing.
std::vector<double> count_paths_to(const Architecture& arch);

/// |P|, the number of paths ending at output neurons.
double count_paths(const Architecture& arch);

/// Every path ending at an output neuron, including the length-0 ones, in
/// canonical order. Throws PathBudgetExceeded when |P| > cap.
std::vector<Path> enumerate_paths(const Architecture& arch, std::size_t cap = kDefaultPathCap);

/// Paths ending at one neuron v (the set P^{->v}), canonical order.
std::vector<Path> enumerate_paths_to(const Architecture& arch, NeuronIndex v,
                                     std::size_t cap = kDefaultPathCap);

/// Phi_p: product of weights along p, times b_{p_0} when p_0 is not an input.
double path_value(const Architecture& arch, const Parameters& params, const Path& p);

struct PathLifting {
  std::vector<Path> index;
  std::vector<double> values;
};

PathLifting path_lifting(const Architecture& arch, const Parameters& params,
                         std::size_t cap = kDefaultPathCap);

/// Rows follow the PathLifting index. Columns are the inputs in id order
/// followed by the bias column. Each row has at most one nonzero entry, in
/// the column of p_0 (or the bias column when p_0 is not an input), so the
/// matrix is stored as that column plus the 0/1 activation.
struct PathActivationMatrix {
  std::vector<Path> index;
  std::vector<std::size_t> column;
  std::vector<std::uint8_t> active;
  std::size_t cols = 0;

  std::size_t rows() const { return index.size(); }
  std::size_t bias_column() const { return cols - 1; }
  int at(std::size_t row, std::size_t col) const { return column[row] == col ? active[row] : 0; }
};

PathActivationMatrix path_activations(const Architecture& arch, const Parameters& params,
                                      std::span<const double> x,
                                      std::size_t cap = kDefaultPathCap);

/// Outputs rebuilt as <Phi^{->v}, A^{->v} (x;1)> for every output v.
std::vector<double> forward_via_lifting(const Architecture& arch, const Parameters& params,
                                        std::span<const double> x,
                                        std::size_t cap = kDefaultPathCap);

struct LiftedOutputs {
  std::vector<double> values;
  /// Per output, sum of |Phi_p a_p x_{p_0}|: the scale rounding errors of
  /// any summation order are measured against.
  std::vector<double> magnitude;
};

LiftedOutputs forward_via_lifting_terms(const Architecture& arch, const Parameters& params,
                                        std::span<const double> x,
                                        std::size_t cap = kDefaultPathCap);

}  // namespace pathgauge
