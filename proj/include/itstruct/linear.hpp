// Copyright 2026 The itstruct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Structure-sensitive information for states on the real line. A sorted
// point set induces one threshold partition per gap, weighted by the gap
// length; every notion is the general structured one on that structure.

#include <cstdint>
#include <functional>
#include <vector>

#include "itstruct/alphabet.hpp"
#include "itstruct/notions.hpp"

namespace itstruct {

/// Strictly increasing real points a_1 < ... < a_n.
class LinearAlphabet {
 public:
  /// Throws TooFewPoints when empty and DuplicateValues unless strictly
  /// increasing.
  explicit LinearAlphabet(std::vector<double> points);

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<double>& points() const noexcept { return points_; }
  double operator[](std::size_t i) const { return points_[i]; }
  /// a_n - a_1 == 1 within 1e-12.
  bool is_normalized() const;
  /// a_{i+1} - a_i for i < n - 1.
  std::vector<double> gaps() const;
  /// Letters named by the shortest round-tripping decimal of each point.
  const AlphabetPtr& alphabet_ptr() const noexcept { return alphabet_; }

 private:
  std::vector<double> points_;
  AlphabetPtr alphabet_;
};

/// Points and probabilities with equal points merged (probabilities summed).
struct CollapsedPoints {
  LinearAlphabet alphabet;
  Distribution p;
};

/// Sorts `points`, merges exact duplicates and sums their weights.
/// Weights are renormalized.
CollapsedPoints collapse_duplicates(std::vector<double> points, std::vector<double> weights);

/// Threshold partitions {a_j : j <= i} | {a_j : j > i}, each with measure
/// a_{i+1} - a_i. Throws TooFewPoints below two points.
PartitionStructure linear_structure(const LinearAlphabet& a);

/// sum_i (a_{i+1} - a_i) * h(P(a_1..a_i)).
double h_r(const LinearAlphabet& a, const Distribution& p);

/// Per-threshold terms of h_r.
struct ThresholdTerm {
  double gap;
  double below;  // P(s_i^-)
  double above;  // P(s_i^+)
  double contribution;
};
std::vector<ThresholdTerm> h_r_terms(const LinearAlphabet& a, const Distribution& p);

/// Joint distribution on A x B re-labelled onto the point alphabets.
JointDistribution linear_joint(const LinearAlphabet& a, const LinearAlphabet& b,
                               std::vector<double> values);

double h_r_joint(const LinearAlphabet& a, const LinearAlphabet& b, const JointDistribution& p);
double h_r_conditional(const LinearAlphabet& a, const LinearAlphabet& b, const JointDistribution& p,
                       Conditioning direction);
double i_r(const LinearAlphabet& a, const LinearAlphabet& b, const JointDistribution& p);
double dkl_r(const LinearAlphabet& a, const Distribution& p1, const Distribution& p2);

/// h_r of distinct sample values with the empirical uniform distribution:
/// sum_{0<i<n} (a_{i+1} - a_i) * h(i/n). Values need not be sorted.
/// Throws DuplicateValues and TooFewPoints.
double h_r_sample(std::vector<double> values);

/// Trapezoid quadrature of h(F(x)) over [lo, hi] with spacing `step`.
/// Throws NonMonotoneCdf when F decreases on the grid.
double h_r_limit(const std::function<double(double)>& cdf, double lo, double hi, double step);

/// h_r of the quantization of `cdf` into `bins` equal-width bins on
/// [lo, hi]: bin midpoints carrying F(right) - F(left).
double h_r_binned(const std::function<double(double)>& cdf, double lo, double hi, std::size_t bins);

enum class SampleLaw { Uniform, Normal };

struct CorrelationSim {
  /// Pearson r between h_r_sample and standard deviation; NaN when either
  /// coordinate has zero variance.
  double pearson;
  std::vector<double> h_r;
  std::vector<double> stddev;
  bool degenerate = false;
};

/// Draws `samples` samples of `points` values each (normal draws clipped
/// at +-6 sigma), min-max normalizes each sample, and correlates h_r_sample
/// with the population standard deviation. Deterministic under `seed`.
CorrelationSim stddev_correlation_sim(std::size_t samples, std::size_t points, SampleLaw law,
                                      std::uint64_t seed);

/// Two-pass Pearson correlation; NaN for zero variance.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace itstruct
