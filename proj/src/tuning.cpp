#include "duet/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>

#include "duet/error.hpp"
#include "text_util.hpp"

namespace duet {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// True when a should be preferred over b.
bool better(const GridResult& a, const GridResult& b) {
  if (a.objective_mean != b.objective_mean) {
    return a.objective_mean > b.objective_mean;
  }
  if (a.point.lambda1 != b.point.lambda1) return a.point.lambda1 > b.point.lambda1;
  if (a.point.lambda2 != b.point.lambda2) return a.point.lambda2 > b.point.lambda2;
  if (a.point.beta != b.point.beta) return a.point.beta < b.point.beta;
  return a.point.gamma < b.point.gamma;
}

void require_values(const std::vector<double>& v, const char* name,
                    bool strictly_positive) {
  if (v.empty()) {
    throw Error(ErrorCode::kInvalidInput, std::string(name) + " grid is empty");
  }
  for (double x : v) {
    const bool ok = std::isfinite(x) && (strictly_positive ? x > 0.0 : x >= 0.0);
    if (!ok) {
      throw Error(ErrorCode::kInvalidHyperparam,
                  std::string(name) + " grid value out of range: " + g17(x));
    }
  }
}

}  // namespace

void GridSpec::validate() const {
  require_values(lambda_values, "lambda", true);
  require_values(beta_values, "beta", false);
  require_values(gamma_values, "gamma", false);
}

Hyperparams to_hyperparams(const GridPoint& point, std::size_t n_item_sides,
                           std::size_t n_user_sides, bool tie_lambdas) {
  Hyperparams hp;
  hp.lambda1 = point.lambda1;
  hp.lambda2 = point.lambda2;
  hp.betas.assign(n_item_sides, point.beta);
  hp.gammas.assign(n_user_sides, point.gamma);
  hp.tie_lambdas = tie_lambdas && point.lambda1 == point.lambda2;
  return hp;
}

std::vector<GridPoint> expand_grid(const GridSpec& grid, Method method) {
  grid.validate();
  const bool sides = uses_side_information(method);
  std::set<GridPoint> points;
  for (double l1 : grid.lambda_values) {
    for (double l2 : grid.lambda_values) {
      if (grid.tie_lambdas && l1 != l2) continue;
      for (double beta : grid.beta_values) {
        for (double gamma : grid.gamma_values) {
          GridPoint p{l1, l2, sides ? beta : 0.0, sides ? gamma : 0.0};
          if (method == Method::kEaseItem) p.lambda2 = p.lambda1;
          if (method == Method::kEaseUser) p.lambda1 = p.lambda2;
          points.insert(p);
        }
      }
    }
  }
  return {points.begin(), points.end()};
}

GridSearchResult grid_search(
    const InteractionMatrix& x, std::span<const SideMatrix> item_sides,
    std::span<const SideMatrix> user_sides, const GridSpec& grid,
    const FoldPlan& plan, Method method, const CvOptions& options,
    std::span<const GridResult> completed,
    const std::function<void(const GridResult&)>& on_result) {
  const auto points = expand_grid(grid, method);
  std::map<GridPoint, const GridResult*> done;
  for (const GridResult& r : completed) done.emplace(r.point, &r);

  GridSearchResult result;
  result.table.reserve(points.size());
  for (const GridPoint& p : points) {
    if (auto it = done.find(p); it != done.end()) {
      result.table.push_back(*it->second);
      continue;
    }
    const Hyperparams hp = to_hyperparams(p, item_sides.size(),
                                          user_sides.size(), grid.tie_lambdas);
    GridResult r;
    r.point = p;
    r.report = run_cv(x, item_sides, user_sides, hp, plan, method, options);
    const MetricSummary s = r.report->summary(grid.objective);
    r.objective_mean = s.mean;
    r.objective_std = s.std;
    result.fits_executed += plan.n_rounds * plan.n_folds;
    if (on_result) on_result(r);
    result.table.push_back(std::move(r));
  }

  const GridResult* best = &result.table.front();
  for (const GridResult& r : result.table) {
    if (better(r, *best)) best = &r;
  }
  result.best_point = best->point;
  result.best = to_hyperparams(best->point, item_sides.size(), user_sides.size(),
                               grid.tie_lambdas);
  return result;
}

NestedCvResult nested_cv(const InteractionMatrix& x,
                         std::span<const SideMatrix> item_sides,
                         std::span<const SideMatrix> user_sides,
                         const GridSpec& grid, const FoldPlan& outer,
                         std::size_t inner_folds, std::size_t inner_rounds,
                         Method method, const CvOptions& options) {
  NestedCvResult out;
  out.report.method = std::string(to_string(method));
  out.report.k_ndcg = options.k_ndcg;
  for (std::size_t round = 0; round < outer.n_rounds; ++round) {
    for (std::size_t fold = 0; fold < outer.n_folds; ++fold) {
      const FoldSplit split = mask_fold(x, outer, round, fold);
      const std::uint64_t inner_seed =
          outer.seed ^ (0x9e3779b97f4a7c15ULL * (round * outer.n_folds + fold + 1));
      const FoldPlan inner =
          make_folds(split.train, inner_folds, inner_rounds, inner_seed);
      const GridSearchResult tuned = grid_search(
          split.train, item_sides, user_sides, grid, inner, method, options);
      out.chosen.push_back(tuned.best_point);
      out.report.per_fold.push_back(evaluate_fold(x, item_sides, user_sides,
                                                  tuned.best, outer, round,
                                                  fold, method, options));
    }
  }
  return out;
}

void write_audit_header(std::ostream& out, std::size_t n_item_sides,
                        std::size_t n_user_sides) {
  out << "lambda1,lambda2";
  for (std::size_t i = 1; i <= n_item_sides; ++i) out << ",beta" << i;
  for (std::size_t i = 1; i <= n_user_sides; ++i) out << ",gamma" << i;
  out << ",objective_mean,objective_std\n";
}

void write_audit_row(std::ostream& out, const GridResult& r,
                     std::size_t n_item_sides, std::size_t n_user_sides) {
  out << g17(r.point.lambda1) << ',' << g17(r.point.lambda2);
  for (std::size_t i = 0; i < n_item_sides; ++i) out << ',' << g17(r.point.beta);
  for (std::size_t i = 0; i < n_user_sides; ++i) out << ',' << g17(r.point.gamma);
  out << ',' << g17(r.objective_mean) << ',' << g17(r.objective_std) << '\n';
}

std::vector<GridResult> read_audit(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return {};
  const auto header = detail::split(detail::trim(line), ',');
  int lambda1 = -1, lambda2 = -1, beta = -1, gamma = -1, mean = -1, sd = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string_view h = detail::trim(header[c]);
    const int ci = static_cast<int>(c);
    if (h == "lambda1") lambda1 = ci;
    else if (h == "lambda2") lambda2 = ci;
    else if (h == "beta1") beta = ci;
    else if (h == "gamma1") gamma = ci;
    else if (h == "objective_mean") mean = ci;
    else if (h == "objective_std") sd = ci;
  }
  if (lambda1 < 0 || lambda2 < 0 || mean < 0 || sd < 0) {
    throw Error(ErrorCode::kParseError, "audit table: unrecognized header");
  }
  std::vector<GridResult> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split(detail::trim(line), ',');
    if (cells.size() != header.size()) {
      // A run killed mid-write can leave a short last line; skip it.
      continue;
    }
    auto num = [&](int col, double fallback) {
      if (col < 0) return fallback;
      double v;
      if (!detail::parse_double(cells[static_cast<std::size_t>(col)], v)) {
        throw Error(ErrorCode::kParseError,
                    "audit table line " + std::to_string(line_no) +
                        ": bad number");
      }
      return v;
    };
    GridResult r;
    r.point = {num(lambda1, 0), num(lambda2, 0), num(beta, 0), num(gamma, 0)};
    r.objective_mean = num(mean, 0);
    r.objective_std = num(sd, 0);
    rows.push_back(r);
  }
  return rows;
}

GridSpec parse_grid(std::istream& in) {
  GridSpec grid;
  for (const auto& kv : detail::read_key_values(in, "grid file")) {
    const std::string ctx = "grid file:" + std::to_string(kv.line);
    if (kv.key == "lambda" || kv.key == "lambda_values") {
      grid.lambda_values = detail::parse_double_list(kv.value, ctx);
    } else if (kv.key == "beta" || kv.key == "beta_values") {
      grid.beta_values = detail::parse_double_list(kv.value, ctx);
    } else if (kv.key == "gamma" || kv.key == "gamma_values") {
      grid.gamma_values = detail::parse_double_list(kv.value, ctx);
    } else if (kv.key == "objective") {
      grid.objective = parse_metric(kv.value);
    } else if (kv.key == "tie_lambdas") {
      grid.tie_lambdas = detail::parse_bool(kv.value, ctx);
    } else {
      throw Error(ErrorCode::kParseError, ctx + ": unknown key '" + kv.key + "'");
    }
  }
  grid.validate();
  return grid;
}

}  // namespace duet
