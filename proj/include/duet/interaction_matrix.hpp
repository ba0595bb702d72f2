#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "duet/dense_matrix.hpp"

namespace duet {

struct Entry {
  std::uint32_t user = 0;
  std::uint32_t item = 0;

  auto operator<=>(const Entry&) const = default;
};

// Binary user x item matrix X held as a sorted set of positive cells.
class InteractionMatrix {
 public:
  InteractionMatrix() = default;

  // Entries are sorted on construction; duplicates or out-of-range indices
  // raise InvalidInput.
  InteractionMatrix(std::vector<std::string> user_labels,
                    std::vector<std::string> item_labels,
                    std::vector<Entry> entries);

  // Labels default to "u<index>" / "i<index>".
  InteractionMatrix(std::size_t n_users, std::size_t n_items,
                    std::vector<Entry> entries);

  std::size_t n_users() const noexcept { return user_labels_.size(); }
  std::size_t n_items() const noexcept { return item_labels_.size(); }
  std::size_t nnz() const noexcept { return entries_.size(); }

  const std::vector<std::string>& user_labels() const noexcept {
    return user_labels_;
  }
  const std::vector<std::string>& item_labels() const noexcept {
    return item_labels_;
  }
  std::span<const Entry> entries() const noexcept { return entries_; }

  bool contains(std::size_t user, std::size_t item) const;

  DenseMatrix dense_view() const;

  // Swaps the roles of users and items.
  InteractionMatrix transposed() const;

  // Same labels, different positive set.
  InteractionMatrix with_entries(std::vector<Entry> entries) const;

 private:
  std::vector<std::string> user_labels_;
  std::vector<std::string> item_labels_;
  std::vector<Entry> entries_;
};

}  // namespace duet
