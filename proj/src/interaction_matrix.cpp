#include "duet/interaction_matrix.hpp"

#include <algorithm>

#include "duet/error.hpp"

namespace duet {

namespace {

std::vector<std::string> default_labels(char prefix, std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(prefix + std::to_string(i));
  }
  return labels;
}

}  // namespace

InteractionMatrix::InteractionMatrix(std::vector<std::string> user_labels,
                                     std::vector<std::string> item_labels,
                                     std::vector<Entry> entries)
    : user_labels_(std::move(user_labels)),
      item_labels_(std::move(item_labels)),
      entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const Entry& e = entries_[k];
    if (e.user >= user_labels_.size() || e.item >= item_labels_.size()) {
      throw Error(ErrorCode::kInvalidInput,
                  "entry (" + std::to_string(e.user) + ", " +
                      std::to_string(e.item) + ") outside " +
                      std::to_string(user_labels_.size()) + "x" +
                      std::to_string(item_labels_.size()) + " matrix");
    }
    if (k > 0 && entries_[k - 1] == e) {
      throw Error(ErrorCode::kInvalidInput,
                  "duplicate entry (" + std::to_string(e.user) + ", " +
                      std::to_string(e.item) + ")");
    }
  }
}

InteractionMatrix::InteractionMatrix(std::size_t n_users, std::size_t n_items,
                                     std::vector<Entry> entries)
    : InteractionMatrix(default_labels('u', n_users),
                        default_labels('i', n_items), std::move(entries)) {}

bool InteractionMatrix::contains(std::size_t user, std::size_t item) const {
  const Entry key{static_cast<std::uint32_t>(user),
                  static_cast<std::uint32_t>(item)};
  return std::binary_search(entries_.begin(), entries_.end(), key);
}

DenseMatrix InteractionMatrix::dense_view() const {
  DenseMatrix m(n_users(), n_items());
  for (const Entry& e : entries_) m(e.user, e.item) = 1.0;
  return m;
}

InteractionMatrix InteractionMatrix::transposed() const {
  std::vector<Entry> swapped;
  swapped.reserve(entries_.size());
  for (const Entry& e : entries_) swapped.push_back({e.item, e.user});
  return InteractionMatrix(item_labels_, user_labels_, std::move(swapped));
}

InteractionMatrix InteractionMatrix::with_entries(
    std::vector<Entry> entries) const {
  return InteractionMatrix(user_labels_, item_labels_, std::move(entries));
}

}  // namespace duet
