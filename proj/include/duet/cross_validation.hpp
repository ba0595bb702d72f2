#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "duet/interaction_matrix.hpp"
#include "duet/model.hpp"

namespace duet {

// Repeated k-fold partition of the positive cells of X. assignments[r][e]
// is the fold of the e-th entry of X (in X's sorted entry order) in round r.
struct FoldPlan {
  std::size_t n_folds = 5;
  std::size_t n_rounds = 3;
  std::uint64_t seed = 0;
  std::size_t n_positives = 0;
  std::vector<std::vector<std::uint32_t>> assignments;

  bool operator==(const FoldPlan&) const = default;
};

// Each round is an independent shuffle dealt round-robin into folds, so
// fold sizes differ by at most one. Throws InvalidInput when X has fewer
// positives than folds.
FoldPlan make_folds(const InteractionMatrix& x, std::size_t n_folds = 5,
                    std::size_t n_rounds = 3, std::uint64_t seed = 42);

struct FoldSplit {
  InteractionMatrix train;
  std::vector<Entry> test_positives;
};

// Training matrix with the fold's positives removed, plus those positives.
FoldSplit mask_fold(const InteractionMatrix& x, const FoldPlan& plan,
                    std::size_t round, std::size_t fold);

enum class Metric { kAupr, kNdcg, kPrec50, kPrec100 };

std::string_view to_string(Metric metric) noexcept;
Metric parse_metric(std::string_view name);  // throws InvalidInput

struct FoldMetrics {
  std::size_t round = 0;
  std::size_t fold = 0;
  double aupr = 0.0;
  double ndcg = 0.0;
  double prec50 = 0.0;
  double prec100 = 0.0;

  double value(Metric metric) const noexcept;
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single cell
};

struct MetricReport {
  std::string method;
  long k_ndcg = 100;
  std::vector<FoldMetrics> per_fold;

  MetricSummary summary(Metric metric) const;
  std::vector<double> samples(Metric metric) const;
};

struct CvOptions {
  long k_ndcg = 100;
  double mix_alpha = 0.5;
  // Folds are evaluated concurrently when > 1; results are merged in
  // (round, fold) order so output does not depend on scheduling.
  unsigned threads = 1;
};

// Scores one fold: fits on the masked training matrix and ranks every cell
// that is not a training positive, held-out positives labelled 1.
FoldMetrics evaluate_fold(const InteractionMatrix& x,
                          std::span<const SideMatrix> item_sides,
                          std::span<const SideMatrix> user_sides,
                          const Hyperparams& hp, const FoldPlan& plan,
                          std::size_t round, std::size_t fold, Method method,
                          const CvOptions& options = {});

MetricReport run_cv(const InteractionMatrix& x,
                    std::span<const SideMatrix> item_sides,
                    std::span<const SideMatrix> user_sides,
                    const Hyperparams& hp, const FoldPlan& plan, Method method,
                    const CvOptions& options = {});

// Columns: method,round,fold,aupr,ndcg<k>,prec50,prec100. Each report is
// followed by a "mean" and a "std" summary row (round field holds the
// label, fold field is empty).
void write_report_csv(std::ostream& out, std::span<const MetricReport> reports);

// Aligned AUPR / NDCG / PREC50 / PREC100 table with mean±std cells.
std::string format_summary_table(std::span<const MetricReport> reports);

}  // namespace duet
