// SPDX-License-Identifier: Apache-2.0
//
// Closed-form ingredients of the path-norm generalization and margin bounds:
//
//   E[generalization error] <= (4 sigma / n) * L * C * ||Phi||_1
//   C = sqrt(D log((3+2P)K) + log((3+2P)/(1+P) * d_in * d_out))
//
// All logarithms are natural. With biases, d_in counts one extra constant
// input coordinate.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pathgauge/graph.hpp"
#include "pathgauge/matrix.hpp"

namespace pathgauge {

struct ArchMeta {
  std::size_t D = 1;  // depth
  std::size_t P = 0;  // distinct k among k-max-pooling neurons
  std::size_t K = 1;  // max kernel size
  std::size_t M = 0;  // pooling layers
  std::size_t d_in = 1;
  std::size_t d_out = 1;
  bool with_bias = false;
  /// Pooling neurons grouped in layers with no skip connection over them.
  bool layered_pooling = true;

  /// d_in, plus one when biases are absorbed into a constant input.
  double effective_d_in() const { return static_cast<double>(d_in) + (with_bias ? 1.0 : 0.0); }
};

/// Metadata of a concrete network. Counts identity neurons in D; run
/// eliminate_identity_neurons first for the tighter depth.
ArchMeta meta_from_network(const Architecture& arch, const Parameters& params);

enum class SigmaVariant { sup_norm, coordinate_with_bias };

/// Empirical sigma, always >= sqrt(n):
///   sup_norm:             sqrt(max(n, sum_i ||X_i||_inf^2))
///   coordinate_with_bias: sqrt(max(n, max_u sum_i X_{i,u}^2)), u ranging
///                         over the columns plus a constant-one column.
/// Throws EmptyDataset.
double sigma_estimate(const Matrix& x, SigmaVariant variant);

double bound_constant_C(const ArchMeta& meta);

/// sqrt(D log 3 + M log K + log(d_in d_out)) (d_in as in effective_d_in).
/// Stated for P <= 1 with layered pooling; nullopt otherwise. Heuristic: the
/// sharpened constant comes without a proof.
std::optional<double> bound_constant_C_sharpened(const ArchMeta& meta);

/// (4 sigma / n) * L * C * path_norm_l1.
double generalization_bound(double sigma, double n, double L, double C, double path_norm_l1);

/// log10 of generalization_bound when the path-norm is only known as a log10.
double generalization_bound_log10(double sigma, double n, double L, double C,
                                  double log10_path_norm_l1);

/// 4 B C / sqrt(n): the data-dependent factor when sigma/n is bounded by B/sqrt(n).
double bound_factor(double B, double n, double C);

/// Class labels are 1-based throughout (1..d_out).
/// y_label - max_{c != label} y_c. Throws OutOfRangeLabel, or DimensionMismatch
/// when d_out < 2.
double margin(std::span<const double> output, long label);

/// 0 above gamma, 1 - M/gamma on [0, gamma], 1 below 0. Throws NonPositiveGamma.
double margin_loss(std::span<const double> output, long label, double gamma);

/// Numerically stable softmax cross-entropy. Throws OutOfRangeLabel.
double cross_entropy(std::span<const double> logits, long label);

inline constexpr double kCrossEntropyLipschitz = 1.4142135623730951;  // sqrt(2)
/// Lipschitz constant of the gamma-margin loss w.r.t. the L2 norm: 2 / gamma.
double margin_loss_lipschitz(double gamma);

struct MarginBound {
  double term1 = 0.0;  // fraction of samples with margin <= gamma
  double term2 = 0.0;  // (8 sigma / n) C ||Phi||_1 / gamma
  double total = 0.0;
};

/// Throws NonPositiveGamma, DimensionMismatch, OutOfRangeLabel.
MarginBound margin_bound(const Matrix& outputs, std::span<const long> labels, double gamma,
                         double sigma, double n, double C, double path_norm_l1);

struct BoundReport {
  double sigma = 0.0;
  double C = 0.0;
  std::optional<double> C_sharpened;
  double L = 0.0;
  double path_norm_l1 = 0.0;
  bool overflow = false;
  double log10_path_norm_l1 = 0.0;
  double bound = 0.0;        // plain value, +inf on overflow
  double log10_bound = 0.0;
  std::optional<MarginBound> margin;
};

}  // namespace pathgauge
