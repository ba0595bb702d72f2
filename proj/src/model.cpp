#include "duet/model.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <future>
#include <string>

#include "duet/error.hpp"
#include "duet/linalg.hpp"

namespace duet {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_lambda(double lambda, const char* name) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidHyperparam,
                std::string(name) + " must be positive and finite, got " +
                    std::to_string(lambda));
  }
}

void require_side_weights(std::span<const double> weights, std::size_t n_sides,
                          const char* name) {
  if (weights.size() != n_sides) {
    throw Error(ErrorCode::kInvalidHyperparam,
                std::to_string(weights.size()) + " " + name + " for " +
                    std::to_string(n_sides) + " side matrices");
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidHyperparam,
                  std::string(name) + " must be nonnegative and finite, got " +
                      std::to_string(w));
    }
  }
}

// Column-wise closed form on an item-oriented problem: x is users x items,
// every side matrix is (aux x items).
DenseMatrix fit_columns(const DenseMatrix& x,
                        std::span<const DenseMatrix> sides, double lambda,
                        std::span<const double> weights, FitTimings* timings) {
  auto start = Clock::now();
  DenseMatrix a(x.cols(), x.cols());
  add_weighted_gram(a, x, 1.0);
  for (std::size_t s = 0; s < sides.size(); ++s) {
    add_weighted_gram(a, sides[s], weights[s]);
  }
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += lambda;
  if (timings) timings->gram_seconds += seconds_since(start);

  start = Clock::now();
  const DenseMatrix p = spd_inverse(a);
  if (timings) timings->factorize_seconds += seconds_since(start);

  start = Clock::now();
  const std::size_t n = p.rows();
  DenseMatrix b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p_row = p.row(i);
    auto b_row = b.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      // + 0.0 folds -0.0 into +0.0.
      b_row[j] = i == j ? 0.0 : -(p_row[j] / p(j, j)) + 0.0;
    }
  }
  if (timings) timings->assemble_seconds += seconds_since(start);
  return b;
}

void check_sides(std::span<const SideMatrix> sides, SideRole role,
                 std::size_t n_items, std::size_t n_users) {
  for (const SideMatrix& s : sides) {
    if (s.role() != role) {
      throw Error(ErrorCode::kInvalidInput,
                  std::string("expected ") + to_string(role) +
                      " matrix, got " + to_string(s.role()));
    }
    // Re-validate against this X; the side may have been built for another.
    validate_side_matrix(s.matrix(), role, n_items, n_users);
  }
}

void require_nonempty(const InteractionMatrix& x) {
  if (x.n_users() == 0 || x.n_items() == 0) {
    throw Error(ErrorCode::kInvalidInput,
                "interaction matrix has no users or no items");
  }
}

void check_zero_diagonal(const DenseMatrix& w, const char* name) {
  if (!w.is_square()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(name) + " weights must be square");
  }
  for (std::size_t i = 0; i < w.rows(); ++i) {
    if (std::abs(w(i, i)) > 1e-10) {
      throw Error(ErrorCode::kInvalidInput,
                  std::string(name) + " weights have nonzero diagonal at " +
                      std::to_string(i));
    }
  }
}

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
}

void fnv_u64(std::uint64_t& h, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  fnv_bytes(h, buf, 8);
}

void fnv_matrix(std::uint64_t& h, const DenseMatrix& m) {
  fnv_u64(h, m.rows());
  fnv_u64(h, m.cols());
  for (double v : m.values()) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    fnv_u64(h, bits);
  }
}

}  // namespace

void Hyperparams::validate(std::size_t n_item_sides,
                           std::size_t n_user_sides) const {
  require_lambda(lambda1, "lambda1");
  require_lambda(lambda2, "lambda2");
  if (tie_lambdas && lambda1 != lambda2) {
    throw Error(ErrorCode::kInvalidHyperparam,
                "tied lambdas differ: lambda1 = " + std::to_string(lambda1) +
                    ", lambda2 = " + std::to_string(lambda2));
  }
  require_side_weights(betas, n_item_sides, "betas");
  require_side_weights(gammas, n_user_sides, "gammas");
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::kEaseItem: return "ease_item";
    case Method::kEaseUser: return "ease_user";
    case Method::kEaseDual: return "ease_dual";
    case Method::kDuet: return "duet";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "ease_item") return Method::kEaseItem;
  if (name == "ease_user") return Method::kEaseUser;
  if (name == "ease_dual") return Method::kEaseDual;
  if (name == "duet") return Method::kDuet;
  throw Error(ErrorCode::kInvalidInput,
              "unknown method '" + std::string(name) +
                  "' (expected ease_item, ease_user, ease_dual or duet)");
}

bool uses_side_information(Method method) noexcept {
  return method == Method::kDuet;
}

std::string_view to_string(ScoreMode mode) noexcept {
  switch (mode) {
    case ScoreMode::kItemOnly: return "item_only";
    case ScoreMode::kUserOnly: return "user_only";
    case ScoreMode::kAveraged: return "averaged";
  }
  return "unknown";
}

ScoreMode parse_score_mode(std::string_view name) {
  if (name == "item_only") return ScoreMode::kItemOnly;
  if (name == "user_only") return ScoreMode::kUserOnly;
  if (name == "averaged") return ScoreMode::kAveraged;
  throw Error(ErrorCode::kInvalidInput,
              "unknown score mode '" + std::string(name) + "'");
}

ScoreMode default_score_mode(Method method) noexcept {
  switch (method) {
    case Method::kEaseItem: return ScoreMode::kItemOnly;
    case Method::kEaseUser: return ScoreMode::kUserOnly;
    default: return ScoreMode::kAveraged;
  }
}

WeightModel::WeightModel(std::optional<DenseMatrix> item_weights,
                         std::optional<DenseMatrix> user_weights,
                         Hyperparams hyperparams, std::uint64_t fingerprint)
    : item_weights_(std::move(item_weights)),
      user_weights_(std::move(user_weights)),
      hyperparams_(std::move(hyperparams)),
      fingerprint_(fingerprint) {
  if (!item_weights_ && !user_weights_) {
    throw Error(ErrorCode::kMissingWeights,
                "model needs item weights, user weights or both");
  }
  if (item_weights_) check_zero_diagonal(*item_weights_, "item");
  if (user_weights_) check_zero_diagonal(*user_weights_, "user");
}

FitTimings& FitTimings::operator+=(const FitTimings& other) noexcept {
  gram_seconds += other.gram_seconds;
  factorize_seconds += other.factorize_seconds;
  assemble_seconds += other.assemble_seconds;
  return *this;
}

DenseMatrix fit_item_weights(const InteractionMatrix& x,
                             std::span<const SideMatrix> sides, double lambda1,
                             std::span<const double> betas,
                             FitTimings* timings) {
  require_lambda(lambda1, "lambda1");
  require_side_weights(betas, sides.size(), "betas");
  require_nonempty(x);
  check_sides(sides, SideRole::kItemSide, x.n_items(), x.n_users());

  std::vector<DenseMatrix> side_mats;
  side_mats.reserve(sides.size());
  for (const SideMatrix& s : sides) side_mats.push_back(s.matrix());
  return fit_columns(x.dense_view(), side_mats, lambda1, betas, timings);
}

DenseMatrix fit_user_weights(const InteractionMatrix& x,
                             std::span<const SideMatrix> sides, double lambda2,
                             std::span<const double> gammas,
                             FitTimings* timings) {
  require_lambda(lambda2, "lambda2");
  require_side_weights(gammas, sides.size(), "gammas");
  require_nonempty(x);
  check_sides(sides, SideRole::kUserSide, x.n_items(), x.n_users());

  // ‖X - UX‖ + Σγ‖Uᵢ - UUᵢ‖ is the item-side problem on Xᵀ with sides Uᵢᵀ.
  std::vector<DenseMatrix> side_mats;
  side_mats.reserve(sides.size());
  for (const SideMatrix& s : sides) side_mats.push_back(s.matrix().transposed());
  return fit_columns(x.transposed().dense_view(), side_mats, lambda2, gammas,
                     timings)
      .transposed();
}

WeightModel fit_duet(const InteractionMatrix& x,
                     std::span<const SideMatrix> item_sides,
                     std::span<const SideMatrix> user_sides,
                     const Hyperparams& hp, const FitOptions& options,
                     FitTimings* timings) {
  hp.validate(item_sides.size(), user_sides.size());
  FitTimings item_t;
  FitTimings user_t;
  DenseMatrix b;
  DenseMatrix u;
  if (options.threads > 1) {
    auto user_fit = std::async(std::launch::async, [&] {
      return fit_user_weights(x, user_sides, hp.lambda2, hp.gammas, &user_t);
    });
    b = fit_item_weights(x, item_sides, hp.lambda1, hp.betas, &item_t);
    u = user_fit.get();
  } else {
    b = fit_item_weights(x, item_sides, hp.lambda1, hp.betas, &item_t);
    u = fit_user_weights(x, user_sides, hp.lambda2, hp.gammas, &user_t);
  }
  if (timings) {
    *timings += item_t;
    *timings += user_t;
  }
  return WeightModel(std::move(b), std::move(u), hp,
                     training_fingerprint(x, item_sides, user_sides));
}

WeightModel fit_method(const InteractionMatrix& x,
                       std::span<const SideMatrix> item_sides,
                       std::span<const SideMatrix> user_sides,
                       const Hyperparams& hp, Method method,
                       const FitOptions& options, FitTimings* timings) {
  if (method == Method::kDuet) {
    return fit_duet(x, item_sides, user_sides, hp, options, timings);
  }
  Hyperparams plain = hp;
  plain.betas.clear();
  plain.gammas.clear();
  plain.validate(0, 0);
  const std::uint64_t fp = training_fingerprint(x, {}, {});
  switch (method) {
    case Method::kEaseItem:
      return WeightModel(fit_item_weights(x, {}, plain.lambda1, {}, timings),
                         std::nullopt, plain, fp);
    case Method::kEaseUser:
      return WeightModel(std::nullopt,
                         fit_user_weights(x, {}, plain.lambda2, {}, timings),
                         plain, fp);
    default:
      return fit_duet(x, {}, {}, plain, options, timings);
  }
}

ScoreMatrix predict(const InteractionMatrix& x, const WeightModel& model,
                    ScoreMode mode, double mix_alpha) {
  if (!(mix_alpha >= 0.0 && mix_alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput,
                "mix_alpha must lie in [0, 1], got " + std::to_string(mix_alpha));
  }
  const bool need_item = mode != ScoreMode::kUserOnly;
  const bool need_user = mode != ScoreMode::kItemOnly;
  if ((need_item && !model.item_weights()) ||
      (need_user && !model.user_weights())) {
    throw Error(ErrorCode::kMissingWeights,
                "mode " + std::string(to_string(mode)) +
                    " needs weights the model does not hold");
  }
  const std::size_t n_users = x.n_users();
  const std::size_t n_items = x.n_items();
  if (need_item && model.item_weights()->rows() != n_items) {
    throw Error(ErrorCode::kDimensionMismatch,
                "item weights are " +
                    std::to_string(model.item_weights()->rows()) +
                    "-dimensional, X has " + std::to_string(n_items) +
                    " items");
  }
  if (need_user && model.user_weights()->rows() != n_users) {
    throw Error(ErrorCode::kDimensionMismatch,
                "user weights are " +
                    std::to_string(model.user_weights()->rows()) +
                    "-dimensional, X has " + std::to_string(n_users) +
                    " users");
  }

  const double item_share = mode == ScoreMode::kAveraged ? 1.0 - mix_alpha : 1.0;
  const double user_share = mode == ScoreMode::kAveraged ? mix_alpha : 1.0;

  DenseMatrix item_scores;
  if (need_item) {
    // Row r of XB is the sum of the rows of B picked by row r of X.
    item_scores = DenseMatrix(n_users, n_items);
    const DenseMatrix& b = *model.item_weights();
    for (const Entry& e : x.entries()) {
      auto out = item_scores.row(e.user);
      const auto src = b.row(e.item);
      for (std::size_t j = 0; j < n_items; ++j) out[j] += src[j];
    }
  }
  DenseMatrix user_scores;
  if (need_user) {
    // Column c of UX is the sum of the columns of U picked by column c of X.
    user_scores = DenseMatrix(n_users, n_items);
    const DenseMatrix& u = *model.user_weights();
    for (std::size_t r = 0; r < n_users; ++r) {
      auto out = user_scores.row(r);
      const auto u_row = u.row(r);
      for (const Entry& e : x.entries()) out[e.item] += u_row[e.user];
    }
  }

  DenseMatrix scores(n_users, n_items);
  auto dst = scores.values();
  if (need_item && need_user) {
    const auto xb = item_scores.values();
    const auto ux = user_scores.values();
    for (std::size_t k = 0; k < dst.size(); ++k) {
      dst[k] = user_share * ux[k] + item_share * xb[k];
    }
  } else if (need_item) {
    scores = std::move(item_scores);
  } else {
    scores = std::move(user_scores);
  }
  return {std::move(scores), mode};
}

double stationarity_residual(const InteractionMatrix& x,
                             std::span<const SideMatrix> sides, double lambda1,
                             std::span<const double> betas,
                             const DenseMatrix& b) {
  require_lambda(lambda1, "lambda1");
  require_side_weights(betas, sides.size(), "betas");
  require_nonempty(x);
  check_sides(sides, SideRole::kItemSide, x.n_items(), x.n_users());
  const std::size_t n = x.n_items();
  if (b.rows() != n || b.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "weights are " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()) + ", expected " +
                    std::to_string(n) + "x" + std::to_string(n));
  }

  DenseMatrix g(n, n);
  add_weighted_gram(g, x.dense_view(), 1.0);
  for (std::size_t s = 0; s < sides.size(); ++s) {
    add_weighted_gram(g, sides[s].matrix(), betas[s]);
  }
  DenseMatrix a = g;
  for (std::size_t i = 0; i < n; ++i) a(i, i) += lambda1;
  const DenseMatrix p = spd_inverse(a);

  DenseMatrix lhs = multiply(a, b);
  DenseMatrix rhs = g;
  for (std::size_t i = 0; i < n; ++i) {
    const double gamma_bar = 1.0 / p(i, i);
    rhs(i, i) -= gamma_bar - lambda1;
  }
  return max_abs_diff(lhs, rhs);
}

std::uint64_t training_fingerprint(const InteractionMatrix& x,
                                   std::span<const SideMatrix> item_sides,
                                   std::span<const SideMatrix> user_sides) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  fnv_u64(h, x.n_users());
  fnv_u64(h, x.n_items());
  for (const Entry& e : x.entries()) {
    fnv_u64(h, (std::uint64_t{e.user} << 32) | e.item);
  }
  fnv_u64(h, item_sides.size());
  for (const SideMatrix& s : item_sides) fnv_matrix(h, s.matrix());
  fnv_u64(h, user_sides.size());
  for (const SideMatrix& s : user_sides) fnv_matrix(h, s.matrix());
  return h;
}

}  // namespace duet
