#include "duet/cross_validation.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "duet/error.hpp"
#include "duet/metrics.hpp"
#include "duet/parallel.hpp"
#include "duet/random.hpp"

namespace duet {

namespace {

constexpr Metric kAllMetrics[] = {Metric::kAupr, Metric::kNdcg, Metric::kPrec50,
                                  Metric::kPrec100};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

FoldPlan make_folds(const InteractionMatrix& x, std::size_t n_folds,
                    std::size_t n_rounds, std::uint64_t seed) {
  if (n_folds < 2) {
    throw Error(ErrorCode::kInvalidInput,
                "need at least 2 folds, got " + std::to_string(n_folds));
  }
  if (n_rounds < 1) {
    throw Error(ErrorCode::kInvalidInput, "need at least 1 round");
  }
  if (x.nnz() < n_folds) {
    throw Error(ErrorCode::kInvalidInput,
                "cannot split " + std::to_string(x.nnz()) + " positives into " +
                    std::to_string(n_folds) + " folds");
  }
  FoldPlan plan;
  plan.n_folds = n_folds;
  plan.n_rounds = n_rounds;
  plan.seed = seed;
  plan.n_positives = x.nnz();

  std::mt19937_64 gen(seed);
  std::vector<std::size_t> perm(x.nnz());
  for (std::size_t r = 0; r < n_rounds; ++r) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    fisher_yates(std::span<std::size_t>(perm), gen);
    std::vector<std::uint32_t> labels(x.nnz());
    for (std::size_t pos = 0; pos < perm.size(); ++pos) {
      labels[perm[pos]] = static_cast<std::uint32_t>(pos % n_folds);
    }
    plan.assignments.push_back(std::move(labels));
  }
  return plan;
}

FoldSplit mask_fold(const InteractionMatrix& x, const FoldPlan& plan,
                    std::size_t round, std::size_t fold) {
  if (round >= plan.n_rounds || fold >= plan.n_folds) {
    throw Error(ErrorCode::kInvalidInput,
                "fold (" + std::to_string(round) + ", " + std::to_string(fold) +
                    ") outside plan of " + std::to_string(plan.n_rounds) +
                    " rounds x " + std::to_string(plan.n_folds) + " folds");
  }
  if (plan.n_positives != x.nnz() || plan.assignments.size() != plan.n_rounds) {
    throw Error(ErrorCode::kInvalidInput,
                "fold plan was built for " + std::to_string(plan.n_positives) +
                    " positives, matrix has " + std::to_string(x.nnz()));
  }
  const auto& labels = plan.assignments[round];
  std::vector<Entry> train;
  std::vector<Entry> test;
  train.reserve(x.nnz());
  const auto entries = x.entries();
  for (std::size_t e = 0; e < entries.size(); ++e) {
    (labels[e] == fold ? test : train).push_back(entries[e]);
  }
  return {x.with_entries(std::move(train)), std::move(test)};
}

std::string_view to_string(Metric metric) noexcept {
  switch (metric) {
    case Metric::kAupr: return "aupr";
    case Metric::kNdcg: return "ndcg";
    case Metric::kPrec50: return "prec50";
    case Metric::kPrec100: return "prec100";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (name == to_string(m)) return m;
  }
  throw Error(ErrorCode::kInvalidInput,
              "unknown metric '" + std::string(name) +
                  "' (expected aupr, ndcg, prec50 or prec100)");
}

double FoldMetrics::value(Metric metric) const noexcept {
  switch (metric) {
    case Metric::kAupr: return aupr;
    case Metric::kNdcg: return ndcg;
    case Metric::kPrec50: return prec50;
    case Metric::kPrec100: return prec100;
  }
  return 0.0;
}

std::vector<double> MetricReport::samples(Metric metric) const {
  std::vector<double> out;
  out.reserve(per_fold.size());
  for (const FoldMetrics& f : per_fold) out.push_back(f.value(metric));
  return out;
}

MetricSummary MetricReport::summary(Metric metric) const {
  const auto v = samples(metric);
  MetricSummary s;
  if (v.empty()) return s;
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

FoldMetrics evaluate_fold(const InteractionMatrix& x,
                          std::span<const SideMatrix> item_sides,
                          std::span<const SideMatrix> user_sides,
                          const Hyperparams& hp, const FoldPlan& plan,
                          std::size_t round, std::size_t fold, Method method,
                          const CvOptions& options) {
  const FoldSplit split = mask_fold(x, plan, round, fold);
  const WeightModel model =
      fit_method(split.train, item_sides, user_sides, hp, method, {});
  const ScoreMatrix scores =
      predict(split.train, model, default_score_mode(method), options.mix_alpha);

  // Flattened pool of every non-training cell in row-major order.
  const std::size_t n_items = x.n_items();
  const std::size_t cells = x.n_users() * n_items;
  std::vector<std::uint8_t> is_train(cells, 0);
  for (const Entry& e : split.train.entries()) {
    is_train[std::size_t{e.user} * n_items + e.item] = 1;
  }
  std::vector<std::uint8_t> is_test(cells, 0);
  for (const Entry& e : split.test_positives) {
    is_test[std::size_t{e.user} * n_items + e.item] = 1;
  }
  std::vector<double> pool_scores;
  std::vector<std::uint8_t> pool_labels;
  pool_scores.reserve(cells - split.train.nnz());
  pool_labels.reserve(cells - split.train.nnz());
  const auto all = scores.scores.values();
  for (std::size_t c = 0; c < cells; ++c) {
    if (is_train[c]) continue;
    pool_scores.push_back(all[c]);
    pool_labels.push_back(is_test[c]);
  }

  const RankingMetrics m =
      evaluate_ranking(pool_scores, pool_labels, options.k_ndcg);
  return {round, fold, m.aupr, m.ndcg, m.prec50, m.prec100};
}

MetricReport run_cv(const InteractionMatrix& x,
                    std::span<const SideMatrix> item_sides,
                    std::span<const SideMatrix> user_sides,
                    const Hyperparams& hp, const FoldPlan& plan, Method method,
                    const CvOptions& options) {
  if (uses_side_information(method)) {
    hp.validate(item_sides.size(), user_sides.size());
  }
  MetricReport report;
  report.method = std::string(to_string(method));
  report.k_ndcg = options.k_ndcg;
  report.per_fold.resize(plan.n_rounds * plan.n_folds);
  parallel_for(report.per_fold.size(), options.threads, [&](std::size_t cell) {
    report.per_fold[cell] =
        evaluate_fold(x, item_sides, user_sides, hp, plan, cell / plan.n_folds,
                      cell % plan.n_folds, method, options);
  });
  return report;
}

void write_report_csv(std::ostream& out, std::span<const MetricReport> reports) {
  const long k = reports.empty() ? 100 : reports.front().k_ndcg;
  out << "method,round,fold,aupr,ndcg" << k << ",prec50,prec100\n";
  for (const MetricReport& r : reports) {
    for (const FoldMetrics& f : r.per_fold) {
      out << r.method << ',' << f.round << ',' << f.fold << ',' << fixed(f.aupr, 10)
          << ',' << fixed(f.ndcg, 10) << ',' << fixed(f.prec50, 10) << ','
          << fixed(f.prec100, 10) << '\n';
    }
    for (const char* label : {"mean", "std"}) {
      const bool is_mean = label[0] == 'm';
      out << r.method << ',' << label << ',';
      for (Metric m : kAllMetrics) {
        const MetricSummary s = r.summary(m);
        out << ',' << fixed(is_mean ? s.mean : s.std, 10);
      }
      out << '\n';
    }
  }
}

std::string format_summary_table(std::span<const MetricReport> reports) {
  std::size_t name_width = 6;
  for (const MetricReport& r : reports) {
    name_width = std::max(name_width, r.method.size());
  }
  const long k = reports.empty() ? 100 : reports.front().k_ndcg;
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(name_width)) << "method";
  for (const std::string& h :
       {std::string("AUPR"), "NDCG" + std::to_string(k), std::string("PREC50"),
        std::string("PREC100")}) {
    out << "  " << std::setw(13) << h;
  }
  out << '\n';
  for (const MetricReport& r : reports) {
    out << std::setw(static_cast<int>(name_width)) << r.method;
    for (Metric m : kAllMetrics) {
      const MetricSummary s = r.summary(m);
      // Pad by bytes: the ± sign is two bytes in UTF-8.
      out << "  " << std::setw(14) << (fixed(s.mean, 3) + "±" + fixed(s.std, 3));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace duet
