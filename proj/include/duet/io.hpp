#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "duet/dense_matrix.hpp"
#include "duet/interaction_matrix.hpp"
#include "duet/model.hpp"
#include "duet/side_similarity.hpp"

namespace duet {

using WarningSink = std::function<void(std::string_view)>;

// Writes "warning: <msg>" to stderr.
void stderr_warning(std::string_view message);

// Tab-separated `user<TAB>item[<TAB>value]` edge list. Lines starting with
// '#' and blank lines are skipped. value is 1 (positive) or 0 (registers the
// labels without a positive). Labels are indexed in first-appearance order.
// Duplicate pairs are kept once with a warning.
InteractionMatrix load_interactions(const std::filesystem::path& path,
                                    const WarningSink& warn = stderr_warning);

// Side matrix aligned to the dataset's label maps. Accepts either a dense
// table (first row: column labels after an empty corner cell; first column:
// row labels) or a `row<TAB>col[<TAB>value]` edge list. Item-side files
// carry item labels on the column axis, user-side files carry user labels
// on the row axis; `transpose` swaps the axes of the file before matching.
SideMatrix load_side(const std::filesystem::path& path, SideRole role,
                     bool transpose, const InteractionMatrix& dataset,
                     const WarningSink& warn = stderr_warning);

struct SideEntry {
  std::string name;
  std::filesystem::path path;
  bool transpose = false;
  std::optional<double> weight;
};

struct DatasetManifest {
  int format_version = 1;
  std::filesystem::path interactions;
  std::vector<SideEntry> item_sides;
  std::vector<SideEntry> user_sides;
};

// Flat `key = value` file:
//   format_version = 1
//   interactions = x.tsv
//   item_side.<name> = path      (repeatable, order kept)
//   item_side.<name>.transpose = true|false
//   item_side.<name>.weight = <beta default>
//   user_side.<name> = ...       (same options)
// Relative paths resolve against the manifest's directory.
DatasetManifest load_manifest(const std::filesystem::path& path);

struct Dataset {
  DatasetManifest manifest;
  InteractionMatrix x;
  std::vector<SideMatrix> item_sides;
  std::vector<SideMatrix> user_sides;
};

Dataset load_dataset(const DatasetManifest& manifest,
                     const WarningSink& warn = stderr_warning);

void write_interactions(const std::filesystem::path& path,
                        const InteractionMatrix& x);

// Dense table in the format load_side reads.
void write_dense_table(const std::filesystem::path& path,
                       const std::vector<std::string>& row_labels,
                       const std::vector<std::string>& col_labels,
                       const DenseMatrix& values);

// Binary container: "DUET", u32 version, u64 header length, key = value
// header text, little-endian f64 row-major payloads (B then U), u64 FNV-1a
// checksum of everything before it.
inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(const WeightModel& model, const std::filesystem::path& path);
void write_model(const WeightModel& model, std::ostream& out);

// Throws UnsupportedVersion for a foreign version, CorruptModel for
// truncation, bad magic or checksum mismatch.
WeightModel load_model(const std::filesystem::path& path);
WeightModel read_model(std::istream& in, const std::string& source = "<stream>");

struct ParamsFile {
  Hyperparams hyperparams;
  std::optional<Method> method;
};

// key = value hyperparameter file, exact to the last bit.
void write_params(std::ostream& out, const Hyperparams& hp,
                  std::optional<Method> method);
ParamsFile read_params(const std::filesystem::path& path);

}  // namespace duet
