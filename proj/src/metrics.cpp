#include "duet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "duet/error.hpp"

namespace duet {

namespace {

void check_lengths(std::span<const double> scores,
                   std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(scores.size()) + " scores for " +
                    std::to_string(labels.size()) + " labels");
  }
  for (std::uint8_t l : labels) {
    if (l > 1) {
      throw Error(ErrorCode::kInvalidInput, "labels must be 0 or 1");
    }
  }
  for (double s : scores) {
    if (std::isnan(s)) throw Error(ErrorCode::kInvalidInput, "NaN score");
  }
}

std::size_t count_positives(std::span<const std::uint8_t> labels) {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

double ap_from_order(std::span<const std::size_t> order,
                     std::span<const std::uint8_t> labels,
                     std::size_t n_pos) {
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t rank = 0; rank < order.size() && hits < n_pos; ++rank) {
    if (labels[order[rank]]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(rank + 1);
    }
  }
  return sum / static_cast<double>(n_pos);
}

double ndcg_from_order(std::span<const std::size_t> order,
                       std::span<const std::uint8_t> labels, std::size_t n_pos,
                       std::size_t k) {
  const std::size_t cut = std::min(k, order.size());
  double dcg = 0.0;
  for (std::size_t rank = 0; rank < cut; ++rank) {
    if (labels[order[rank]]) dcg += 1.0 / std::log2(static_cast<double>(rank) + 2.0);
  }
  double ideal = 0.0;
  for (std::size_t rank = 0; rank < std::min(cut, n_pos); ++rank) {
    ideal += 1.0 / std::log2(static_cast<double>(rank) + 2.0);
  }
  return dcg / ideal;
}

double precision_from_order(std::span<const std::size_t> order,
                            std::span<const std::uint8_t> labels,
                            std::size_t k) {
  std::size_t hits = 0;
  for (std::size_t rank = 0; rank < k; ++rank) hits += labels[order[rank]];
  return static_cast<double>(hits) / static_cast<double>(k);
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v, double mean) {
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

std::vector<std::size_t> ranking_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  return order;
}

double aupr(std::span<const double> scores,
            std::span<const std::uint8_t> labels) {
  check_lengths(scores, labels);
  const std::size_t n_pos = count_positives(labels);
  if (n_pos == 0 || n_pos == labels.size()) {
    throw Error(ErrorCode::kUndefinedMetric,
                "average precision needs at least one positive and one "
                "negative label");
  }
  const auto order = ranking_order(scores);
  return ap_from_order(order, labels, n_pos);
}

double ndcg_at_k(std::span<const double> scores,
                 std::span<const std::uint8_t> labels, long k) {
  check_lengths(scores, labels);
  if (k <= 0) {
    throw Error(ErrorCode::kInvalidInput,
                "NDCG cutoff must be positive, got " + std::to_string(k));
  }
  const std::size_t n_pos = count_positives(labels);
  if (n_pos == 0) {
    throw Error(ErrorCode::kUndefinedMetric, "NDCG needs a positive label");
  }
  const auto order = ranking_order(scores);
  return ndcg_from_order(order, labels, n_pos, static_cast<std::size_t>(k));
}

double precision_at_k(std::span<const double> scores,
                      std::span<const std::uint8_t> labels, long k) {
  check_lengths(scores, labels);
  if (k <= 0 || static_cast<std::size_t>(k) > scores.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "precision cutoff " + std::to_string(k) + " outside [1, " +
                    std::to_string(scores.size()) + "]");
  }
  const auto order = ranking_order(scores);
  return precision_from_order(order, labels, static_cast<std::size_t>(k));
}

RankingMetrics evaluate_ranking(std::span<const double> scores,
                                std::span<const std::uint8_t> labels,
                                long k_ndcg) {
  check_lengths(scores, labels);
  if (k_ndcg <= 0) {
    throw Error(ErrorCode::kInvalidInput,
                "NDCG cutoff must be positive, got " + std::to_string(k_ndcg));
  }
  const std::size_t n_pos = count_positives(labels);
  if (n_pos == 0 || n_pos == labels.size()) {
    throw Error(ErrorCode::kUndefinedMetric,
                "ranking metrics need at least one positive and one negative "
                "candidate");
  }
  const auto order = ranking_order(scores);
  const std::size_t n = order.size();
  RankingMetrics m;
  m.aupr = ap_from_order(order, labels, n_pos);
  m.ndcg = ndcg_from_order(order, labels, n_pos, static_cast<std::size_t>(k_ndcg));
  m.prec50 = precision_from_order(order, labels, std::min<std::size_t>(50, n));
  m.prec100 = precision_from_order(order, labels, std::min<std::size_t>(100, n));
  return m;
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorCode::kUndefinedMetric,
                "t-test needs at least two values per sample");
  }
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  const double va = sample_variance(a, ma) / static_cast<double>(a.size());
  const double vb = sample_variance(b, mb) / static_cast<double>(b.size());
  const double se2 = va + vb;
  if (!(se2 > 0.0)) {
    throw Error(ErrorCode::kUndefinedMetric,
                "t-test undefined: both samples have zero variance");
  }
  TTestResult r;
  r.t = (ma - mb) / std::sqrt(se2);
  r.df = se2 * se2 /
         (va * va / static_cast<double>(a.size() - 1) +
          vb * vb / static_cast<double>(b.size() - 1));
  if (r.t == 0.0) {
    r.p = 1.0;
  } else {
    const boost::math::students_t dist(r.df);
    r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
    r.p = std::clamp(r.p, 0.0, 1.0);
  }
  return r;
}

}  // namespace duet
