// SPDX-License-Identifier: Apache-2.0
//
// Mixed path-norms ||Phi(theta)||_{q,r}, the DAG operator-norm product
// Pi_{q,r}(theta), and the input-Lipschitz bound ||Phi||_{1,r}.
//
// The fast path-norm is a single forward pass of |theta|^q on the all-ones
// input, after every k-max-pooling neuron has been turned into an identity
// neuron. The exact route enumerates paths and is only usable on small graphs.
#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "pathgauge/graph.hpp"
#include "pathgauge/paths.hpp"

namespace pathgauge {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Exponents of the inner (per-output) and outer norms. q must be finite
/// for every path-norm; r may be infinite.
struct NormSpec {
  double q = 1.0;
  double r = 1.0;

  /// Throws InvalidNormSpec unless 0 < q < inf and 0 < r <= inf.
  void check() const;
};

/// ||x||_q for q in (0, inf]; q < 1 gives the usual quasi-norm.
double lq_norm(std::span<const double> x, double q);

struct PathNormResult {
  double value = 0.0;
  /// Some intermediate exceeded the double range; value is then +inf.
  bool overflow = false;
  /// Set in log-domain mode; stays finite where value would overflow.
  double log10_value = -kInfinity;
};

enum class NormMode { plain, log_domain };

PathNormResult path_norm_fast(const Architecture& arch, const Parameters& params, NormSpec spec,
                              NormMode mode = NormMode::plain);

/// Direct evaluation from the enumerated path-lifting. Throws PathBudgetExceeded.
double path_norm_exact(const Architecture& arch, const Parameters& params, NormSpec spec,
                       std::size_t cap = kDefaultPathCap);

/// The forward-pass formula WITHOUT replacing max-pooling neurons. It
/// undercounts pooled paths and is kept to exhibit the discrepancy.
PathNormResult naive_forward_norm(const Architecture& arch, const Parameters& params,
                                  NormSpec spec);

/// ||Phi^{->v}(theta)||_q for every neuron v (q in (0, inf]).
std::vector<double> subgraph_path_norms(const Architecture& arch, const Parameters& params,
                                        double q);

/// (sum_l |gamma_{p_l}|^q prod_{k>l} ||theta^{->p_k}||_q^q)^{1/q} with
/// gamma = 1 on inputs and the bias elsewhere.
double pathwise_product(const Architecture& arch, const Parameters& params, const Path& path,
                        double q);

/// Pi_{q,r}: outer r-norm over outputs of the max pathwise product over the
/// paths ending there. Computed by a per-neuron recursion on the DAG:
///   value(v) = |gamma_v|^q + ||theta^{->v}||_q^q * max_{u in ant(v)} value(u).
double dag_operator_product(const Architecture& arch, const Parameters& params, NormSpec spec);

/// ||Phi||_{1,r}: ||R(x) - R(x')||_r <= bound * ||x - x'||_inf.
PathNormResult lipschitz_bound(const Architecture& arch, const Parameters& params, double r);

}  // namespace pathgauge
