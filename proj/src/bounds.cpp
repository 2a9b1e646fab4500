// SPDX-License-Identifier: Apache-2.0
#include "pathgauge/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pathgauge/errors.hpp"

namespace pathgauge {

ArchMeta meta_from_network(const Architecture& arch, const Parameters& params) {
  require_valid(arch, params);
  ArchMeta meta;
  for (NeuronIndex v = 0; v < arch.size(); ++v) {
    if (arch.is_input(v) || params.biases[v] == 0.0) continue;
    if (arch.activation(v).kind == ActivationKind::kpool) throw PoolBiasNonZero(arch.id(v));
    meta.with_bias = true;
  }
  const PoolStats pools = pool_stats(arch);
  meta.D = depth(arch);
  meta.P = pools.distinct_k;
  meta.K = pools.max_kernel;
  meta.M = pools.pool_layers;
  meta.layered_pooling = pools.layered_pooling;
  meta.d_in = arch.input_dim();
  meta.d_out = arch.output_dim();
  return meta;
}

double sigma_estimate(const Matrix& x, SigmaVariant variant) {
  if (x.rows() == 0) throw EmptyDataset();
  const auto n = static_cast<double>(x.rows());
  double s = 0.0;
  if (variant == SigmaVariant::sup_norm) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      double m = 0.0;
      for (double v : x.row(i)) m = std::max(m, std::abs(v));
      s += m * m;
    }
  } else {
    s = n;  // the constant-one column
    for (std::size_t j = 0; j < x.cols(); ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < x.rows(); ++i) col += x(i, j) * x(i, j);
      s = std::max(s, col);
    }
  }
  return std::sqrt(std::max(n, s));
}

double bound_constant_C(const ArchMeta& meta) {
  const double P = static_cast<double>(meta.P);
  const double D = static_cast<double>(meta.D);
  const double K = static_cast<double>(meta.K);
  const double dims = meta.effective_d_in() * static_cast<double>(meta.d_out);
  return std::sqrt(D * std::log((3.0 + 2.0 * P) * K) + std::log((3.0 + 2.0 * P) / (1.0 + P) * dims));
}

std::optional<double> bound_constant_C_sharpened(const ArchMeta& meta) {
  if (meta.P > 1 || !meta.layered_pooling) return std::nullopt;
  const double dims = meta.effective_d_in() * static_cast<double>(meta.d_out);
  return std::sqrt(static_cast<double>(meta.D) * std::log(3.0) +
                   static_cast<double>(meta.M) * std::log(static_cast<double>(meta.K)) +
                   std::log(dims));
}

double generalization_bound(double sigma, double n, double L, double C, double path_norm_l1) {
  return 4.0 * sigma / n * L * C * path_norm_l1;
}

double generalization_bound_log10(double sigma, double n, double L, double C,
                                  double log10_path_norm_l1) {
  return std::log10(4.0 * sigma / n * L * C) + log10_path_norm_l1;
}

double bound_factor(double B, double n, double C) { return 4.0 * B * C / std::sqrt(n); }

namespace {

std::size_t checked_label(std::span<const double> output, long label) {
  if (label < 1 || static_cast<std::size_t>(label) > output.size())
    throw OutOfRangeLabel(label, output.size());
  return static_cast<std::size_t>(label - 1);
}

double best_other(std::span<const double> output, std::size_t c) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < output.size(); ++j)
    if (j != c) m = std::max(m, output[j]);
  return m;
}

}  // namespace

double margin(std::span<const double> output, long label) {
  if (output.size() < 2) throw DimensionMismatch("margin needs at least two classes");
  const std::size_t c = checked_label(output, label);
  return output[c] - best_other(output, c);
}

double margin_loss(std::span<const double> output, long label, double gamma) {
  if (!(gamma > 0.0)) throw NonPositiveGamma();
  const double m = margin(output, label);
  if (gamma < m) return 0.0;
  if (m < 0.0) return 1.0;
  return 1.0 - m / gamma;
}

double margin_loss_lipschitz(double gamma) {
  if (!(gamma > 0.0)) throw NonPositiveGamma();
  return 2.0 / gamma;
}

double cross_entropy(std::span<const double> logits, long label) {
  const std::size_t c = checked_label(logits, label);
  const double top = *std::max_element(logits.begin(), logits.end());
  // -log softmax_c = (top - x_c) + log(sum_d exp(x_d - top)); when c attains
  // the max, the log argument is 1 + (small) and log1p keeps the precision.
  double rest = 0.0;
  bool skipped = false;
  for (std::size_t d = 0; d < logits.size(); ++d) {
    if (!skipped && d == c && logits[d] == top) {
      skipped = true;
      continue;
    }
    rest += std::exp(logits[d] - top);
  }
  if (skipped) return std::log1p(rest);
  return (top - logits[c]) + std::log(rest);
}

MarginBound margin_bound(const Matrix& outputs, std::span<const long> labels, double gamma,
                         double sigma, double n, double C, double path_norm_l1) {
  if (!(gamma > 0.0)) throw NonPositiveGamma();
  if (labels.size() != outputs.rows()) throw DimensionMismatch(outputs.rows(), labels.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < outputs.rows(); ++i) {
    const auto row = outputs.row(i);
    if (row.size() < 2) throw DimensionMismatch("margin needs at least two classes");
    const std::size_t c = checked_label(row, labels[i]);
    if (row[c] <= gamma + best_other(row, c)) ++hits;
  }
  MarginBound b;
  b.term1 = outputs.rows() == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(outputs.rows());
  b.term2 = 8.0 * sigma / n * C * path_norm_l1 / gamma;
  b.total = b.term1 + b.term2;
  return b;
}

}  // namespace pathgauge
