#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "duet/dense_matrix.hpp"
#include "duet/interaction_matrix.hpp"
#include "duet/side_similarity.hpp"

namespace duet {

// Ridge strengths and side-information weights.
//
// lambda1/betas regularize the item-item weights B, lambda2/gammas the
// user-user weights U. betas[i] pairs with the i-th item-side matrix and
// gammas[i] with the i-th user-side matrix.
struct Hyperparams {
  double lambda1 = 100.0;
  double lambda2 = 100.0;
  std::vector<double> betas;
  std::vector<double> gammas;
  bool tie_lambdas = true;

  // Throws InvalidHyperparam.
  void validate(std::size_t n_item_sides, std::size_t n_user_sides) const;

  bool operator==(const Hyperparams&) const = default;
};

// ease_item: item-item weights only (XB). ease_user: user-user only (UX).
// ease_dual: both, averaged, no side information. duet: both, averaged,
// each side regularized by its association matrices.
enum class Method { kEaseItem, kEaseUser, kEaseDual, kDuet };

std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view name);  // throws InvalidInput
bool uses_side_information(Method method) noexcept;

enum class ScoreMode { kItemOnly, kUserOnly, kAveraged };

std::string_view to_string(ScoreMode mode) noexcept;
ScoreMode parse_score_mode(std::string_view name);
ScoreMode default_score_mode(Method method) noexcept;

// Fitted weights. At least one side is present and every diagonal entry is
// zero to within 1e-10.
class WeightModel {
 public:
  WeightModel(std::optional<DenseMatrix> item_weights,
              std::optional<DenseMatrix> user_weights, Hyperparams hyperparams,
              std::uint64_t fingerprint);

  const std::optional<DenseMatrix>& item_weights() const noexcept {
    return item_weights_;
  }
  const std::optional<DenseMatrix>& user_weights() const noexcept {
    return user_weights_;
  }
  const Hyperparams& hyperparams() const noexcept { return hyperparams_; }
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

  bool operator==(const WeightModel&) const = default;

 private:
  std::optional<DenseMatrix> item_weights_;
  std::optional<DenseMatrix> user_weights_;
  Hyperparams hyperparams_;
  std::uint64_t fingerprint_ = 0;
};

struct ScoreMatrix {
  DenseMatrix scores;
  ScoreMode provenance = ScoreMode::kAveraged;
};

// Wall-clock seconds spent per stage of a closed-form fit.
struct FitTimings {
  double gram_seconds = 0.0;
  double factorize_seconds = 0.0;
  double assemble_seconds = 0.0;

  double total() const noexcept {
    return gram_seconds + factorize_seconds + assemble_seconds;
  }
  FitTimings& operator+=(const FitTimings& other) noexcept;
};

// B = I - P·diagMat(1 ⊘ diag(P)),  P = (XᵀX + Σ βᵢ BᵢᵀBᵢ + λ₁I)⁻¹.
DenseMatrix fit_item_weights(const InteractionMatrix& x,
                             std::span<const SideMatrix> sides, double lambda1,
                             std::span<const double> betas,
                             FitTimings* timings = nullptr);

// U = I - diagMat(1 ⊘ diag(Q))·Q,  Q = (XXᵀ + Σ γᵢ UᵢUᵢᵀ + λ₂I)⁻¹.
// Computed as the transpose of the item-side fit on Xᵀ.
DenseMatrix fit_user_weights(const InteractionMatrix& x,
                             std::span<const SideMatrix> sides, double lambda2,
                             std::span<const double> gammas,
                             FitTimings* timings = nullptr);

struct FitOptions {
  // >1 lets the item and user fits run concurrently.
  unsigned threads = 1;
};

// Both weight matrices, each regularized by its side matrices.
WeightModel fit_duet(const InteractionMatrix& x,
                     std::span<const SideMatrix> item_sides,
                     std::span<const SideMatrix> user_sides,
                     const Hyperparams& hp, const FitOptions& options = {},
                     FitTimings* timings = nullptr);

// Dispatches on method. Side matrices are ignored by the EASE variants.
WeightModel fit_method(const InteractionMatrix& x,
                       std::span<const SideMatrix> item_sides,
                       std::span<const SideMatrix> user_sides,
                       const Hyperparams& hp, Method method,
                       const FitOptions& options = {},
                       FitTimings* timings = nullptr);

// item_only -> XB, user_only -> UX, averaged -> mix_alpha·UX +
// (1 - mix_alpha)·XB. Throws MissingWeights when the model lacks a side
// the mode needs.
ScoreMatrix predict(const InteractionMatrix& x, const WeightModel& model,
                    ScoreMode mode, double mix_alpha = 0.5);

// Max-norm of (G + λ₁I)B - (G - diagMat(γ̄ - λ₁)) with G = XᵀX + Σ βᵢBᵢᵀBᵢ
// and γ̄ = 1 ⊘ diag((G + λ₁I)⁻¹): zero exactly when B satisfies the
// stationarity condition of the constrained objective.
double stationarity_residual(const InteractionMatrix& x,
                             std::span<const SideMatrix> sides, double lambda1,
                             std::span<const double> betas,
                             const DenseMatrix& b);

// FNV-1a over X and the side matrices.
std::uint64_t training_fingerprint(const InteractionMatrix& x,
                                   std::span<const SideMatrix> item_sides,
                                   std::span<const SideMatrix> user_sides);

}  // namespace duet
