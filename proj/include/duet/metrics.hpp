#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace duet {

// Ranking metrics over one flattened candidate list. Everywhere, candidates
// are ranked by descending score with ties broken by ascending index, so
// results are deterministic. Labels are 0/1.

// Indices of scores in ranked order.
std::vector<std::size_t> ranking_order(std::span<const double> scores);

// Average precision (step-wise area under the precision-recall curve).
// Throws UndefinedMetric when labels are all 0 or all 1.
double aupr(std::span<const double> scores,
            std::span<const std::uint8_t> labels);

// Binary-gain NDCG over the top k. Throws InvalidInput for k <= 0 and
// UndefinedMetric when there is no positive label.
double ndcg_at_k(std::span<const double> scores,
                 std::span<const std::uint8_t> labels, long k);

// Throws InvalidInput for k <= 0 or k > number of candidates.
double precision_at_k(std::span<const double> scores,
                      std::span<const std::uint8_t> labels, long k);

struct RankingMetrics {
  double aupr = 0.0;
  double ndcg = 0.0;
  double prec50 = 0.0;
  double prec100 = 0.0;
};

// All four benchmark metrics from a single sort. Cutoffs larger than the
// list are clamped to its length.
RankingMetrics evaluate_ranking(std::span<const double> scores,
                                std::span<const std::uint8_t> labels,
                                long k_ndcg = 100);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  double df = 0.0;
};

// Two-sided Welch (unequal variance) t-test. Throws UndefinedMetric when a
// sample has fewer than two values or both samples have zero variance.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace duet
