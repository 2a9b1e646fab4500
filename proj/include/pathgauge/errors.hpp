// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pathgauge {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CyclicGraph : public Error {
 public:
  CyclicGraph() : Error("graph contains a cycle") {}
};

class UnknownNeuron : public Error {
 public:
  explicit UnknownNeuron(const std::string& id) : Error("unknown neuron '" + id + "'") {}
};

class DuplicateNeuron : public Error {
 public:
  explicit DuplicateNeuron(const std::string& id) : Error("duplicate neuron '" + id + "'") {}
};

class ParallelEdge : public Error {
 public:
  ParallelEdge(const std::string& from, const std::string& to)
      : Error("parallel edge " + from + "->" + to) {}
};

/// Raised by operations requiring a valid architecture (see validate()).
class InvalidArchitecture : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(got)) {}
  using Error::Error;
};

class PathBudgetExceeded : public Error {
 public:
  PathBudgetExceeded(double count, std::size_t cap)
      : Error("path count " + std::to_string(count) + " exceeds budget " + std::to_string(cap)) {}
};

class InvalidNormSpec : public Error {
 public:
  using Error::Error;
};

class NonPositiveScale : public Error {
 public:
  NonPositiveScale() : Error("rescaling factor must be positive") {}
};

class NotHiddenNeuron : public Error {
 public:
  explicit NotHiddenNeuron(const std::string& id) : Error("neuron '" + id + "' is not hidden") {}
};

class PoolBiasNonZero : public Error {
 public:
  explicit PoolBiasNonZero(const std::string& id)
      : Error("max-pooling neuron '" + id + "' has a nonzero bias") {}
};

class BiasedIdentityNeuron : public Error {
 public:
  explicit BiasedIdentityNeuron(const std::string& id)
      : Error("hidden identity neuron '" + id + "' has a nonzero bias") {}
};

/// An identity neuron feeding a k-max-pooling neuron cannot be folded into
/// its successors without changing the pooled terms.
class IdentityFeedsPool : public Error {
 public:
  IdentityFeedsPool(const std::string& id, const std::string& pool)
      : Error("identity neuron '" + id + "' cannot be folded into max-pooling neuron '" + pool +
              "'") {}
};

class EmptyKernel : public Error {
 public:
  EmptyKernel() : Error("pooling kernel must have at least one antecedent") {}
};

class EmptyDataset : public Error {
 public:
  EmptyDataset() : Error("dataset is empty") {}
};

class OutOfRangeLabel : public Error {
 public:
  OutOfRangeLabel(long label, std::size_t classes)
      : Error("label " + std::to_string(label) + " outside 1.." + std::to_string(classes)) {}
};

class NonPositiveGamma : public Error {
 public:
  NonPositiveGamma() : Error("margin gamma must be positive") {}
};

/// Malformed network or dataset file; `where` locates the offending field.
class ParseError : public Error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : Error(where.empty() ? what : where + ": " + what) {}
};

}  // namespace pathgauge
