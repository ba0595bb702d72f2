#include "duet/synthetic.hpp"

#include <random>
#include <string>

#include "duet/error.hpp"
#include "duet/random.hpp"

namespace duet {

namespace {

BinaryProfileSet make_profiles(char prefix,
                               const std::vector<std::uint32_t>& blocks,
                               const PlantedBlocksSpec& spec,
                               std::mt19937_64& gen) {
  std::vector<std::string> labels;
  DenseMatrix profiles(blocks.size(), spec.n_features);
  for (std::size_t e = 0; e < blocks.size(); ++e) {
    labels.push_back(prefix + std::to_string(e));
    for (std::size_t f = 0; f < spec.n_features; ++f) {
      const bool own = f % spec.n_blocks == blocks[e];
      if (uniform01(gen) < (own ? spec.feature_in : spec.feature_out)) {
        profiles(e, f) = 1.0;
      }
    }
  }
  return BinaryProfileSet(std::move(labels), std::move(profiles));
}

}  // namespace

SyntheticDataset make_planted_blocks(const PlantedBlocksSpec& spec) {
  if (spec.n_users == 0 || spec.n_items == 0 || spec.n_blocks == 0 ||
      spec.n_features == 0) {
    throw Error(ErrorCode::kInvalidInput, "synthetic dataset needs nonzero sizes");
  }
  if (!(spec.density > 0.0 && spec.density <= 1.0) ||
      !(spec.in_block_share >= 0.0 && spec.in_block_share <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "density and share must lie in (0, 1]");
  }
  const double b = static_cast<double>(spec.n_blocks);
  const double p_in = spec.n_blocks == 1
                          ? spec.density
                          : spec.in_block_share * spec.density * b;
  const double p_out = spec.n_blocks == 1
                           ? spec.density
                           : (1.0 - spec.in_block_share) * spec.density * b / (b - 1.0);

  SyntheticDataset d;
  for (std::size_t u = 0; u < spec.n_users; ++u) {
    d.user_block.push_back(static_cast<std::uint32_t>(u % spec.n_blocks));
  }
  for (std::size_t i = 0; i < spec.n_items; ++i) {
    d.item_block.push_back(static_cast<std::uint32_t>(i % spec.n_blocks));
  }

  std::mt19937_64 gen(spec.seed);
  std::vector<Entry> entries;
  for (std::size_t u = 0; u < spec.n_users; ++u) {
    for (std::size_t i = 0; i < spec.n_items; ++i) {
      const double p = d.user_block[u] == d.item_block[i] ? p_in : p_out;
      if (uniform01(gen) < p) {
        entries.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(i)});
      }
    }
  }
  d.x = InteractionMatrix(spec.n_users, spec.n_items, std::move(entries));
  d.user_similarity = jaccard_similarity(make_profiles('u', d.user_block, spec, gen));
  d.item_similarity = jaccard_similarity(make_profiles('i', d.item_block, spec, gen));
  return d;
}

}  // namespace duet
