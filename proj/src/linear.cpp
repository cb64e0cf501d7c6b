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

#include "itstruct/linear.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "itstruct/entropy.hpp"
#include "itstruct/seed.hpp"

namespace itstruct {

namespace {

std::string shortest(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

void require_two(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::TooFewPoints, "at least two points are required");
}

void check_size(const LinearAlphabet& a, const Distribution& p) {
  if (p.size() != a.size()) throw Error(ErrorKind::AlphabetMismatch, "distribution size differs from point count");
}

Distribution on(const LinearAlphabet& a, const Distribution& p) {
  check_size(a, p);
  return Distribution(a.alphabet_ptr(), {p.probs().begin(), p.probs().end()});
}

StructuredJoint structured(const LinearAlphabet& a, const LinearAlphabet& b, const JointDistribution& p) {
  if (p.row_count() != a.size() || p.col_count() != b.size()) {
    throw Error(ErrorKind::AlphabetMismatch, "joint shape differs from point counts");
  }
  return StructuredJoint(linear_joint(a, b, {p.values().begin(), p.values().end()}), linear_structure(a),
                         linear_structure(b));
}

}  // namespace

LinearAlphabet::LinearAlphabet(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorKind::TooFewPoints, "point set is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) throw Error(ErrorKind::InvalidAlphabet, "points must be finite");
    if (i > 0 && !(points_[i - 1] < points_[i])) {
      throw Error(ErrorKind::DuplicateValues, "points must be strictly increasing (at index " +
                                                  std::to_string(i) + ")");
    }
  }
  std::vector<std::string> names;
  for (double x : points_) names.push_back(shortest(x));
  alphabet_ = make_alphabet(std::move(names));
}

bool LinearAlphabet::is_normalized() const {
  return std::abs(points_.back() - points_.front() - 1.0) <= 1e-12;
}

std::vector<double> LinearAlphabet::gaps() const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) out.push_back(points_[i + 1] - points_[i]);
  return out;
}

CollapsedPoints collapse_duplicates(std::vector<double> points, std::vector<double> weights) {
  if (points.size() != weights.size()) {
    throw Error(ErrorKind::InvalidDistribution, "points and weights differ in length");
  }
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return points[i] < points[j]; });
  std::vector<double> xs, ws;
  for (auto i : order) {
    if (!xs.empty() && xs.back() == points[i]) {
      ws.back() += weights[i];
    } else {
      xs.push_back(points[i]);
      ws.push_back(weights[i]);
    }
  }
  LinearAlphabet a(std::move(xs));
  Distribution p(a.alphabet_ptr(), std::move(ws), true);
  return {std::move(a), std::move(p)};
}

PartitionStructure linear_structure(const LinearAlphabet& a) {
  require_two(a.size());
  const std::size_t n = a.size();
  std::vector<PartitionStructure::Entry> entries;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::vector<std::size_t> labels(n, 0);
    std::fill(labels.begin() + static_cast<std::ptrdiff_t>(i) + 1, labels.end(), 1);
    entries.emplace_back(Partition::from_labels(labels), a[i + 1] - a[i]);
  }
  return PartitionStructure(a.alphabet_ptr(), std::move(entries));
}

std::vector<ThresholdTerm> h_r_terms(const LinearAlphabet& a, const Distribution& p) {
  require_two(a.size());
  check_size(a, p);
  std::vector<ThresholdTerm> out;
  double below = 0.0;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    below += p[i];
    // The upper side is summed directly so tiny tails keep full precision.
    double above = 0.0;
    for (std::size_t j = i + 1; j < a.size(); ++j) above += p[j];
    const double gap = a[i + 1] - a[i];
    out.push_back({gap, below, above, gap * entropy(std::vector<double>{below, above})});
  }
  return out;
}

double h_r(const LinearAlphabet& a, const Distribution& p) {
  std::vector<double> terms;
  for (const auto& t : h_r_terms(a, p)) terms.push_back(t.contribution);
  return pairwise_sum(terms);
}

JointDistribution linear_joint(const LinearAlphabet& a, const LinearAlphabet& b, std::vector<double> values) {
  return JointDistribution(a.alphabet_ptr(), b.alphabet_ptr(), std::move(values));
}

double h_r_joint(const LinearAlphabet& a, const LinearAlphabet& b, const JointDistribution& p) {
  return h_s_joint(structured(a, b, p));
}

double h_r_conditional(const LinearAlphabet& a, const LinearAlphabet& b, const JointDistribution& p,
                       Conditioning direction) {
  return h_s_conditional(structured(a, b, p), direction);
}

double i_r(const LinearAlphabet& a, const LinearAlphabet& b, const JointDistribution& p) {
  return i_s(structured(a, b, p));
}

double dkl_r(const LinearAlphabet& a, const Distribution& p1, const Distribution& p2) {
  return d_kl_s(StructuredAlphabet(on(a, p1), linear_structure(a)), on(a, p2));
}

double h_r_sample(std::vector<double> values) {
  require_two(values.size());
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  std::vector<double> terms;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i - 1] < values[i])) throw Error(ErrorKind::DuplicateValues, "sample values must be distinct");
    terms.push_back((values[i] - values[i - 1]) * binary_entropy(static_cast<double>(i) / n));
  }
  return pairwise_sum(terms);
}

double h_r_limit(const std::function<double(double)>& cdf, double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi > lo)) throw Error(ErrorKind::InvalidDistribution, "need lo < hi and step > 0");
  const auto intervals = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9));
  std::vector<double> f(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    f[k] = cdf(k == intervals ? hi : lo + static_cast<double>(k) * step);
    if (k > 0 && f[k] < f[k - 1] - 1e-12) {
      throw Error(ErrorKind::NonMonotoneCdf, "cdf decreases near x = " + shortest(lo + k * step));
    }
  }
  std::vector<double> terms;
  for (std::size_t k = 0; k < intervals; ++k) {
    const double x0 = lo + static_cast<double>(k) * step;
    const double x1 = k + 1 == intervals ? hi : x0 + step;
    const double h0 = binary_entropy(std::clamp(f[k], 0.0, 1.0));
    const double h1 = binary_entropy(std::clamp(f[k + 1], 0.0, 1.0));
    terms.push_back(0.5 * (x1 - x0) * (h0 + h1));
  }
  return pairwise_sum(terms);
}

double h_r_binned(const std::function<double(double)>& cdf, double lo, double hi, std::size_t bins) {
  if (bins < 2) throw Error(ErrorKind::TooFewPoints, "need at least two bins");
  if (!(hi > lo)) throw Error(ErrorKind::InvalidDistribution, "need lo < hi");
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<double> points, masses;
  double prev = cdf(lo);
  for (std::size_t k = 0; k < bins; ++k) {
    const double right = k + 1 == bins ? hi : lo + static_cast<double>(k + 1) * width;
    const double f = cdf(right);
    if (f < prev - 1e-12) throw Error(ErrorKind::NonMonotoneCdf, "cdf decreases near x = " + shortest(right));
    points.push_back(lo + (static_cast<double>(k) + 0.5) * width);
    masses.push_back(std::max(0.0, f - prev));
    prev = f;
  }
  LinearAlphabet a(std::move(points));
  return h_r(a, Distribution(a.alphabet_ptr(), std::move(masses), true));
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(x.size());
  const double mx = pairwise_sum(x) / n;
  const double my = pairwise_sum(y) / n;
  std::vector<double> sxy, sxx, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy.push_back((x[i] - mx) * (y[i] - my));
    sxx.push_back((x[i] - mx) * (x[i] - mx));
    syy.push_back((y[i] - my) * (y[i] - my));
  }
  const double vx = pairwise_sum(sxx);
  const double vy = pairwise_sum(syy);
  // Relative threshold: affine copies leave only rounding noise.
  const double scale_x = std::max(1.0, mx * mx) * n;
  const double scale_y = std::max(1.0, my * my) * n;
  if (vx <= 1e-24 * scale_x || vy <= 1e-24 * scale_y) return std::numeric_limits<double>::quiet_NaN();
  return pairwise_sum(sxy) / std::sqrt(vx * vy);
}

CorrelationSim stddev_correlation_sim(std::size_t samples, std::size_t points, SampleLaw law,
                                      std::uint64_t seed) {
  if (points < 3) throw Error(ErrorKind::TooFewPoints, "each sample needs at least three points");
  CorrelationSim out{};
  for (std::size_t s = 0; s < samples; ++s) {
    std::mt19937_64 rng(derive_seed(seed, s));
    std::vector<double> xs(points);
    if (law == SampleLaw::Uniform) {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (auto& x : xs) x = u(rng);
    } else {
      std::normal_distribution<double> g(0.0, 1.0);
      for (auto& x : xs) x = std::clamp(g(rng), -6.0, 6.0);
    }
    const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    const double lo = *mn;
    const double width = *mx - lo;
    for (auto& x : xs) x = (x - lo) / width;
    const double mean = pairwise_sum(xs) / static_cast<double>(points);
    std::vector<double> sq;
    for (double x : xs) sq.push_back((x - mean) * (x - mean));
    out.stddev.push_back(std::sqrt(pairwise_sum(sq) / static_cast<double>(points)));
    out.h_r.push_back(h_r_sample(xs));
  }
  out.pearson = pearson(out.h_r, out.stddev);
  out.degenerate = std::isnan(out.pearson);
  return out;
}

}  // namespace itstruct
