#include "duet/side_similarity.hpp"

#include <bit>
#include <cstdint>
#include <string>

#include "duet/error.hpp"

namespace duet {

BinaryProfileSet::BinaryProfileSet(std::vector<std::string> labels,
                                   DenseMatrix profiles)
    : labels_(std::move(labels)), profiles_(std::move(profiles)) {
  if (profiles_.rows() == 0) {
    throw Error(ErrorCode::kInvalidInput, "profile set has no entities");
  }
  if (labels_.size() != profiles_.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(labels_.size()) + " labels for " +
                    std::to_string(profiles_.rows()) + " profiles");
  }
  for (double v : profiles_.values()) {
    if (v != 0.0 && v != 1.0) {
      throw Error(ErrorCode::kInvalidInput,
                  "profile entries must be 0 or 1, got " + std::to_string(v));
    }
  }
}

SimilarityMatrix jaccard_similarity(const BinaryProfileSet& profiles) {
  const DenseMatrix& p = profiles.profiles();
  const std::size_t n = p.rows();
  const std::size_t words = (p.cols() + 63) / 64;

  std::vector<std::uint64_t> bits(n * words, 0);
  std::vector<std::size_t> counts(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = p.row(i);
    for (std::size_t f = 0; f < row.size(); ++f) {
      if (row[f] != 0.0) {
        bits[i * words + f / 64] |= std::uint64_t{1} << (f % 64);
        ++counts[i];
      }
    }
  }

  DenseMatrix s(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      std::size_t inter = 0;
      for (std::size_t w = 0; w < words; ++w) {
        inter += static_cast<std::size_t>(
            std::popcount(bits[i * words + w] & bits[j * words + w]));
      }
      const std::size_t uni = counts[i] + counts[j] - inter;
      const double v = uni == 0 ? 0.0
                                : static_cast<double>(inter) /
                                      static_cast<double>(uni);
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return {profiles.labels(), std::move(s)};
}

const char* to_string(SideRole role) noexcept {
  return role == SideRole::kItemSide ? "item_side" : "user_side";
}

SideMatrix validate_side_matrix(DenseMatrix m, SideRole role,
                                std::size_t n_items, std::size_t n_users) {
  if (m.empty()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(to_string(role)) + " matrix is empty");
  }
  if (role == SideRole::kItemSide && m.cols() != n_items) {
    throw Error(ErrorCode::kDimensionMismatch,
                "item_side matrix must have one column per item (expected " +
                    std::to_string(n_items) + " columns, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                    ")");
  }
  if (role == SideRole::kUserSide && m.rows() != n_users) {
    throw Error(ErrorCode::kDimensionMismatch,
                "user_side matrix must have one row per user (expected " +
                    std::to_string(n_users) + " rows, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                    ")");
  }
  return SideMatrix(role, std::move(m));
}

}  // namespace duet
