#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "duet/interaction_matrix.hpp"
#include "duet/side_similarity.hpp"

namespace duet {

// Planted-partition generator. Users and items are dealt round-robin into
// n_blocks clusters; a user-item cell is positive with higher probability
// when both share a cluster. Each entity also gets a binary feature profile
// whose features lean towards its cluster, and the Jaccard similarity of
// those profiles forms the side matrices, so side information carries the
// same structure as X.
struct PlantedBlocksSpec {
  std::size_t n_users = 200;
  std::size_t n_items = 150;
  std::size_t n_blocks = 2;
  double density = 0.05;
  // Share of the positive mass that falls inside matching blocks.
  double in_block_share = 0.8;
  std::size_t n_features = 60;
  double feature_in = 0.3;
  double feature_out = 0.03;
  std::uint64_t seed = 1;
};

struct SyntheticDataset {
  InteractionMatrix x;
  SimilarityMatrix user_similarity;
  SimilarityMatrix item_similarity;
  std::vector<std::uint32_t> user_block;
  std::vector<std::uint32_t> item_block;
};

SyntheticDataset make_planted_blocks(const PlantedBlocksSpec& spec);

}  // namespace duet
