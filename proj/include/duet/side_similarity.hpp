#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "duet/dense_matrix.hpp"

namespace duet {

// One binary feature vector per entity (e.g. a compound's gene profile).
class BinaryProfileSet {
 public:
  BinaryProfileSet(std::vector<std::string> labels, DenseMatrix profiles);

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const DenseMatrix& profiles() const noexcept { return profiles_; }

 private:
  std::vector<std::string> labels_;
  DenseMatrix profiles_;
};

struct SimilarityMatrix {
  std::vector<std::string> labels;
  DenseMatrix values;
};

// Pairwise Tanimoto/Jaccard index |a ∩ b| / |a ∪ b|. Two empty profiles
// score 0, including an empty profile against itself.
SimilarityMatrix jaccard_similarity(const BinaryProfileSet& profiles);

enum class SideRole { kItemSide, kUserSide };

const char* to_string(SideRole role) noexcept;

// Association matrix regularizing one side of the model. Item-side
// matrices are (aux entities x n_items) so that B_i·B is conformable;
// user-side matrices are (n_users x aux entities) so that U·U_i is.
// A square similarity matrix is just the case aux entities = items/users.
class SideMatrix {
 public:
  SideRole role() const noexcept { return role_; }
  const DenseMatrix& matrix() const noexcept { return matrix_; }

 private:
  friend SideMatrix validate_side_matrix(DenseMatrix m, SideRole role,
                                         std::size_t n_items,
                                         std::size_t n_users);
  SideMatrix(SideRole role, DenseMatrix m) : role_(role), matrix_(std::move(m)) {}

  SideRole role_;
  DenseMatrix matrix_;
};

// Throws DimensionMismatch naming the expected axis when M cannot be
// multiplied into the objective for the given role.
SideMatrix validate_side_matrix(DenseMatrix m, SideRole role,
                                std::size_t n_items, std::size_t n_users);

}  // namespace duet
