#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "duet/cross_validation.hpp"
#include "duet/model.hpp"

namespace duet {

struct GridSpec {
  std::vector<double> lambda_values{1, 10, 100, 500, 1000, 5000};
  std::vector<double> beta_values{0, 0.1, 0.5, 1, 5, 10};
  std::vector<double> gamma_values{0, 0.1, 0.5, 1, 5, 10};
  Metric objective = Metric::kAupr;
  bool tie_lambdas = true;

  void validate() const;  // throws InvalidInput / InvalidHyperparam
};

// One point of the search surface. beta applies to every item-side matrix
// and gamma to every user-side matrix.
struct GridPoint {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  auto operator<=>(const GridPoint&) const = default;
};

Hyperparams to_hyperparams(const GridPoint& point, std::size_t n_item_sides,
                           std::size_t n_user_sides, bool tie_lambdas);

// Distinct points in canonical (sorted) order. Parameters the method does
// not use are collapsed: beta/gamma to 0 for the EASE variants, the unused
// lambda onto the used one for single-sided methods.
std::vector<GridPoint> expand_grid(const GridSpec& grid, Method method);

struct GridResult {
  GridPoint point;
  double objective_mean = 0.0;
  double objective_std = 0.0;
  std::optional<MetricReport> report;  // absent for resumed points
};

struct GridSearchResult {
  GridPoint best_point;
  Hyperparams best;
  std::vector<GridResult> table;  // canonical grid order
  std::size_t fits_executed = 0;
};

// Evaluates every grid point with run_cv and returns the argmax of the
// objective mean. Exact ties go to larger lambda, then smaller beta, then
// smaller gamma. Points found in `completed` are reused instead of refitted;
// on_result fires after each fresh evaluation.
GridSearchResult grid_search(
    const InteractionMatrix& x, std::span<const SideMatrix> item_sides,
    std::span<const SideMatrix> user_sides, const GridSpec& grid,
    const FoldPlan& plan, Method method, const CvOptions& options = {},
    std::span<const GridResult> completed = {},
    const std::function<void(const GridResult&)>& on_result = {});

struct NestedCvResult {
  MetricReport report;
  std::vector<GridPoint> chosen;  // per outer (round, fold) cell
};

// Leakage-free variant: each outer training split is tuned on its own inner
// fold plan before the held-out fold is scored.
NestedCvResult nested_cv(const InteractionMatrix& x,
                         std::span<const SideMatrix> item_sides,
                         std::span<const SideMatrix> user_sides,
                         const GridSpec& grid, const FoldPlan& outer,
                         std::size_t inner_folds, std::size_t inner_rounds,
                         Method method, const CvOptions& options = {});

// Audit table: lambda1,lambda2,beta1..betaN,gamma1..gammaM,objective_mean,
// objective_std. Values are printed with 17 significant digits so a resumed
// run can match points exactly.
void write_audit_header(std::ostream& out, std::size_t n_item_sides,
                        std::size_t n_user_sides);
void write_audit_row(std::ostream& out, const GridResult& result,
                     std::size_t n_item_sides, std::size_t n_user_sides);
std::vector<GridResult> read_audit(std::istream& in);

// key = value grid file: lambda, beta, gamma (comma-separated lists),
// objective, tie_lambdas.
GridSpec parse_grid(std::istream& in);

}  // namespace duet
