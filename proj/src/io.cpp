#include "duet/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "duet/error.hpp"
#include "text_util.hpp"

namespace duet {

namespace fs = std::filesystem;

namespace {

std::string where(const fs::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

std::ifstream open_input(const fs::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  return in;
}

std::ofstream open_output(const fs::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc
                                 : std::ios::out | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  }
  return out;
}

struct Line {
  std::size_t number;
  std::vector<std::string_view> fields;
};

// Non-comment, non-blank lines split on tabs. Views point into `storage`.
std::vector<Line> read_table(std::istream& in, std::vector<std::string>& storage) {
  std::string raw;
  std::vector<std::size_t> numbers;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (detail::trim(raw).empty() || raw.front() == '#') continue;
    storage.push_back(std::move(raw));
    numbers.push_back(n);
  }
  std::vector<Line> lines;
  lines.reserve(storage.size());
  for (std::size_t i = 0; i < storage.size(); ++i) {
    lines.push_back({numbers[i], detail::split(storage[i], '\t')});
  }
  return lines;
}

class LabelIndex {
 public:
  std::uint32_t intern(std::string_view label) {
    auto [it, inserted] =
        index_.try_emplace(std::string(label), static_cast<std::uint32_t>(labels_.size()));
    if (inserted) labels_.emplace_back(label);
    return it->second;
  }
  std::vector<std::string> take() { return std::move(labels_); }
  std::size_t size() const { return labels_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> labels_;
};

std::unordered_map<std::string, std::size_t> index_of(
    const std::vector<std::string>& labels) {
  std::unordered_map<std::string, std::size_t> map;
  map.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) map.emplace(labels[i], i);
  return map;
}

// Raw side table as read from disk, before alignment.
struct RawTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  DenseMatrix values;
};

bool looks_like_edge_list(const std::vector<Line>& lines) {
  if (lines.empty() || lines.front().fields.front().empty()) return false;
  for (const Line& l : lines) {
    if (l.fields.size() < 2 || l.fields.size() > 3) return false;
    double v;
    if (l.fields.size() == 3 && !detail::parse_double(l.fields[2], v)) return false;
  }
  return true;
}

RawTable parse_side_table(const fs::path& path, const WarningSink& warn) {
  std::ifstream in = open_input(path);
  std::vector<std::string> storage;
  const auto lines = read_table(in, storage);
  if (lines.empty()) {
    throw Error(ErrorCode::kEmptyDataset, path.string() + ": no data lines");
  }

  RawTable t;
  if (looks_like_edge_list(lines)) {
    LabelIndex rows, cols;
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> cells;
    for (const Line& l : lines) {
      double v = 1.0;
      if (l.fields.size() == 3) detail::parse_double(l.fields[2], v);
      const auto key = std::make_pair(rows.intern(detail::trim(l.fields[0])),
                                      cols.intern(detail::trim(l.fields[1])));
      auto [it, inserted] = cells.emplace(key, v);
      if (!inserted) {
        warn(where(path, l.number) + ": duplicate pair, keeping the last value");
        it->second = v;
      }
    }
    t.values = DenseMatrix(rows.size(), cols.size());
    for (const auto& [key, v] : cells) t.values(key.first, key.second) = v;
    t.row_labels = rows.take();
    t.col_labels = cols.take();
    return t;
  }

  const auto& header = lines.front().fields;
  if (header.size() < 2) {
    throw Error(ErrorCode::kParseError,
                where(path, lines.front().number) + ": dense header needs labels");
  }
  for (std::size_t c = 1; c < header.size(); ++c) {
    t.col_labels.emplace_back(detail::trim(header[c]));
  }
  const std::size_t n_cols = t.col_labels.size();
  std::vector<double> values;
  values.reserve((lines.size() - 1) * n_cols);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const Line& l = lines[r];
    if (l.fields.size() != n_cols + 1) {
      throw Error(ErrorCode::kParseError,
                  where(path, l.number) + ": expected " +
                      std::to_string(n_cols + 1) + " fields, got " +
                      std::to_string(l.fields.size()));
    }
    t.row_labels.emplace_back(detail::trim(l.fields[0]));
    for (std::size_t c = 1; c < l.fields.size(); ++c) {
      double v;
      if (!detail::parse_double(l.fields[c], v)) {
        throw Error(ErrorCode::kParseError,
                    where(path, l.number) + ": field " + std::to_string(c + 1) +
                        " is not a finite number");
      }
      values.push_back(v);
    }
  }
  t.values = DenseMatrix(t.row_labels.size(), n_cols, std::move(values));
  for (const auto* axis : {&t.row_labels, &t.col_labels}) {
    std::set<std::string_view> seen;
    for (const auto& label : *axis) {
      if (!seen.insert(label).second) {
        throw Error(ErrorCode::kParseError,
                    path.string() + ": duplicate label '" + label + "'");
      }
    }
  }
  return t;
}

std::vector<std::string> unknown_labels(
    const std::vector<std::string>& labels,
    const std::unordered_map<std::string, std::size_t>& known) {
  std::vector<std::string> out;
  for (const auto& l : labels) {
    if (!known.contains(l)) out.push_back(l);
  }
  return out;
}

std::string first_ten(const std::vector<std::string>& labels) {
  std::string s;
  for (std::size_t i = 0; i < labels.size() && i < 10; ++i) {
    if (i) s += ", ";
    s += "'" + labels[i] + "'";
  }
  if (labels.size() > 10) s += ", ...";
  return s;
}

// Little-endian encoding independent of the host byte order.
void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>(v >> (8 * i)));
}
void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>(v >> (8 * i)));
}
std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{p[i]} << (8 * i);
  return v;
}
std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{p[i]} << (8 * i);
  return v;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string hex_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += hex_double(v[i]);
  }
  return s;
}

double parse_exact(const std::string& s, const std::string& context) {
  const std::string t(detail::trim(s));
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw Error(ErrorCode::kParseError,
                context + ": not a number: '" + t + "'");
  }
  return v;
}

std::vector<double> parse_exact_list(const std::string& s,
                                     const std::string& context) {
  std::vector<double> out;
  if (detail::trim(s).empty()) return out;
  for (auto part : detail::split(s, ',')) {
    out.push_back(parse_exact(std::string(part), context));
  }
  return out;
}

const std::string& require_key(const std::map<std::string, std::string>& kv,
                               const std::string& key, const std::string& source) {
  auto it = kv.find(key);
  if (it == kv.end()) {
    throw Error(ErrorCode::kCorruptModel, source + ": header lacks '" + key + "'");
  }
  return it->second;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string g17_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += g17(v[i]);
  }
  return s;
}

}  // namespace

void stderr_warning(std::string_view message) {
  std::cerr << "warning: " << message << '\n';
}

InteractionMatrix load_interactions(const fs::path& path,
                                    const WarningSink& warn) {
  std::ifstream in = open_input(path);
  std::vector<std::string> storage;
  const auto lines = read_table(in, storage);

  LabelIndex users, items;
  std::vector<Entry> entries;
  std::set<Entry> seen;
  for (const Line& l : lines) {
    if (l.fields.size() < 2 || l.fields.size() > 3) {
      throw Error(ErrorCode::kParseError,
                  where(path, l.number) + ": expected 2 or 3 tab-separated "
                                          "fields, got " +
                      std::to_string(l.fields.size()));
    }
    const auto user = detail::trim(l.fields[0]);
    const auto item = detail::trim(l.fields[1]);
    if (user.empty() || item.empty()) {
      throw Error(ErrorCode::kParseError, where(path, l.number) + ": empty label");
    }
    double value = 1.0;
    if (l.fields.size() == 3 &&
        (!detail::parse_double(l.fields[2], value) ||
         (value != 0.0 && value != 1.0))) {
      throw Error(ErrorCode::kParseError,
                  where(path, l.number) + ": value must be 0 or 1");
    }
    const Entry e{users.intern(user), items.intern(item)};
    if (value == 0.0) continue;
    if (!seen.insert(e).second) {
      warn(where(path, l.number) + ": duplicate pair (" + std::string(user) +
           ", " + std::string(item) + ") kept once");
      continue;
    }
    entries.push_back(e);
  }
  if (entries.empty()) {
    throw Error(ErrorCode::kEmptyDataset,
                path.string() + ": no positive interactions");
  }
  return InteractionMatrix(users.take(), items.take(), std::move(entries));
}

SideMatrix load_side(const fs::path& path, SideRole role, bool transpose,
                     const InteractionMatrix& dataset, const WarningSink& warn) {
  RawTable t = parse_side_table(path, warn);
  if (transpose) {
    std::swap(t.row_labels, t.col_labels);
    t.values = t.values.transposed();
  }

  const bool item_side = role == SideRole::kItemSide;
  const auto& domain = item_side ? dataset.item_labels() : dataset.user_labels();
  const auto known = index_of(domain);
  const auto& aligned_axis = item_side ? t.col_labels : t.row_labels;
  const auto& other_axis = item_side ? t.row_labels : t.col_labels;
  const char* domain_name = item_side ? "item" : "user";
  const char* axis_name = item_side ? "column" : "row";

  const auto unknown = unknown_labels(aligned_axis, known);
  if (!unknown.empty()) {
    if (unknown_labels(other_axis, known).empty()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  path.string() + ": " + to_string(role) + " matrix must carry " +
                      domain_name + " labels on the " + axis_name +
                      " axis; they appear on the other axis (set transpose)");
    }
    throw Error(ErrorCode::kUnknownLabel,
                path.string() + ": " + std::to_string(unknown.size()) + " " +
                    axis_name + " labels are not " + domain_name +
                    "s of the dataset: " + first_ten(unknown));
  }

  DenseMatrix aligned;
  if (item_side) {
    aligned = DenseMatrix(t.values.rows(), dataset.n_items());
    for (std::size_t c = 0; c < t.col_labels.size(); ++c) {
      const std::size_t dst = known.at(t.col_labels[c]);
      for (std::size_t r = 0; r < t.values.rows(); ++r) {
        aligned(r, dst) = t.values(r, c);
      }
    }
  } else {
    aligned = DenseMatrix(dataset.n_users(), t.values.cols());
    for (std::size_t r = 0; r < t.row_labels.size(); ++r) {
      const std::size_t dst = known.at(t.row_labels[r]);
      std::copy(t.values.row(r).begin(), t.values.row(r).end(),
                aligned.row(dst).begin());
    }
  }
  return validate_side_matrix(std::move(aligned), role, dataset.n_items(),
                              dataset.n_users());
}

DatasetManifest load_manifest(const fs::path& path) {
  std::ifstream in = open_input(path);
  const auto kvs = detail::read_key_values(in, path.string());
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    fs::path candidate(p);
    return (candidate.is_absolute() ? candidate : base / candidate).lexically_normal();
  };

  DatasetManifest m;
  bool have_interactions = false;
  for (const auto& kv : kvs) {
    const std::string ctx = where(path, kv.line);
    if (kv.key == "format_version") {
      double v;
      if (!detail::parse_double(kv.value, v)) {
        throw Error(ErrorCode::kParseError, ctx + ": bad format_version");
      }
      if (v != 1.0) {
        throw Error(ErrorCode::kUnsupportedVersion,
                    ctx + ": manifest format_version " + kv.value +
                        " is not supported (expected 1)");
      }
      m.format_version = 1;
      continue;
    }
    if (kv.key == "interactions") {
      if (have_interactions) {
        throw Error(ErrorCode::kParseError, ctx + ": interactions given twice");
      }
      m.interactions = resolve(kv.value);
      have_interactions = true;
      continue;
    }
    const bool item = kv.key.starts_with("item_side.");
    const bool user = kv.key.starts_with("user_side.");
    if (!item && !user) {
      throw Error(ErrorCode::kParseError, ctx + ": unknown key '" + kv.key + "'");
    }
    auto& sides = item ? m.item_sides : m.user_sides;
    const std::string rest = kv.key.substr(std::strlen("item_side."));
    const auto dot = rest.find('.');
    const std::string name = rest.substr(0, dot);
    if (name.empty()) {
      throw Error(ErrorCode::kParseError, ctx + ": side entry needs a name");
    }
    auto it = std::find_if(sides.begin(), sides.end(),
                           [&](const SideEntry& s) { return s.name == name; });
    if (dot == std::string::npos) {
      if (it != sides.end()) {
        throw Error(ErrorCode::kParseError, ctx + ": side '" + name + "' given twice");
      }
      sides.push_back({name, resolve(kv.value), false, std::nullopt});
      continue;
    }
    if (it == sides.end()) {
      throw Error(ErrorCode::kParseError,
                  ctx + ": option for undeclared side '" + name + "'");
    }
    const std::string option = rest.substr(dot + 1);
    if (option == "transpose") {
      it->transpose = detail::parse_bool(kv.value, ctx);
    } else if (option == "weight") {
      double w;
      if (!detail::parse_double(kv.value, w) || w < 0.0) {
        throw Error(ErrorCode::kParseError, ctx + ": weight must be a nonnegative number");
      }
      it->weight = w;
    } else {
      throw Error(ErrorCode::kParseError, ctx + ": unknown side option '" + option + "'");
    }
  }
  if (!have_interactions) {
    throw Error(ErrorCode::kParseError, path.string() + ": no interactions entry");
  }
  std::set<fs::path> paths{m.interactions};
  for (const auto* sides : {&m.item_sides, &m.user_sides}) {
    for (const SideEntry& s : *sides) {
      if (!paths.insert(s.path).second) {
        throw Error(ErrorCode::kParseError,
                    path.string() + ": file referenced twice: " + s.path.string());
      }
    }
  }
  return m;
}

Dataset load_dataset(const DatasetManifest& manifest, const WarningSink& warn) {
  Dataset d;
  d.manifest = manifest;
  d.x = load_interactions(manifest.interactions, warn);
  for (const SideEntry& s : manifest.item_sides) {
    d.item_sides.push_back(
        load_side(s.path, SideRole::kItemSide, s.transpose, d.x, warn));
  }
  for (const SideEntry& s : manifest.user_sides) {
    d.user_sides.push_back(
        load_side(s.path, SideRole::kUserSide, s.transpose, d.x, warn));
  }
  return d;
}

void write_interactions(const fs::path& path, const InteractionMatrix& x) {
  std::ofstream out = open_output(path);
  // Zero-valued lines first so every label, including those without a
  // positive, comes back in the same order.
  const std::size_t n = std::max(x.n_users(), x.n_items());
  for (std::size_t k = 0; k < n; ++k) {
    out << x.user_labels()[std::min(k, x.n_users() - 1)] << '\t'
        << x.item_labels()[std::min(k, x.n_items() - 1)] << "\t0\n";
  }
  for (const Entry& e : x.entries()) {
    out << x.user_labels()[e.user] << '\t' << x.item_labels()[e.item] << '\n';
  }
}

void write_dense_table(const fs::path& path,
                       const std::vector<std::string>& row_labels,
                       const std::vector<std::string>& col_labels,
                       const DenseMatrix& values) {
  if (row_labels.size() != values.rows() || col_labels.size() != values.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "labels do not match table shape");
  }
  std::ofstream out = open_output(path);
  for (const auto& c : col_labels) out << '\t' << c;
  out << '\n';
  for (std::size_t r = 0; r < values.rows(); ++r) {
    out << row_labels[r];
    for (double v : values.row(r)) out << '\t' << g17(v);
    out << '\n';
  }
}

void write_model(const WeightModel& model, std::ostream& out) {
  const std::size_t n_items = model.item_weights() ? model.item_weights()->rows() : 0;
  const std::size_t n_users = model.user_weights() ? model.user_weights()->rows() : 0;
  const Hyperparams& hp = model.hyperparams();
  char fp[24];
  std::snprintf(fp, sizeof fp, "%016" PRIx64, model.fingerprint());

  std::ostringstream header;
  header << "n_items = " << n_items << '\n'
         << "n_users = " << n_users << '\n'
         << "item_weights = " << (model.item_weights() ? 1 : 0) << '\n'
         << "user_weights = " << (model.user_weights() ? 1 : 0) << '\n'
         << "lambda1 = " << hex_double(hp.lambda1) << '\n'
         << "lambda2 = " << hex_double(hp.lambda2) << '\n'
         << "betas = " << hex_list(hp.betas) << '\n'
         << "gammas = " << hex_list(hp.gammas) << '\n'
         << "tie_lambdas = " << (hp.tie_lambdas ? 1 : 0) << '\n'
         << "fingerprint = " << fp << '\n';
  const std::string text = header.str();

  std::string buf = "DUET";
  put_u32(buf, kModelFormatVersion);
  put_u64(buf, text.size());
  buf += text;
  for (const auto* w : {&model.item_weights(), &model.user_weights()}) {
    if (!*w) continue;
    for (double v : (*w)->values()) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      put_u64(buf, bits);
    }
  }
  put_u64(buf, fnv1a(buf));
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::kIoError, "failed writing model");
}

void save_model(const WeightModel& model, const fs::path& path) {
  std::ofstream out = open_output(path, true);
  write_model(model, out);
}

WeightModel read_model(std::istream& in, const std::string& source) {
  const std::string buf((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  const auto* bytes = reinterpret_cast<const unsigned char*>(buf.data());
  if (buf.size() < 8 || buf.compare(0, 4, "DUET") != 0) {
    throw Error(ErrorCode::kCorruptModel, source + ": not a DUET model file");
  }
  const std::uint32_t version = get_u32(bytes + 4);
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                source + ": model format version " + std::to_string(version) +
                    " (supported: " + std::to_string(kModelFormatVersion) + ")");
  }
  if (buf.size() < 16 + 8) {
    throw Error(ErrorCode::kCorruptModel, source + ": truncated header");
  }
  const std::uint64_t header_len = get_u64(bytes + 8);
  if (header_len > buf.size() - 24) {
    throw Error(ErrorCode::kCorruptModel, source + ": truncated header");
  }
  const std::size_t checksum_at = buf.size() - 8;
  if (fnv1a(std::string_view(buf).substr(0, checksum_at)) !=
      get_u64(bytes + checksum_at)) {
    throw Error(ErrorCode::kCorruptModel, source + ": checksum mismatch");
  }

  std::istringstream header(buf.substr(16, header_len));
  std::map<std::string, std::string> kv;
  for (auto& entry : detail::read_key_values(header, source + " header")) {
    kv[entry.key] = entry.value;
  }
  const auto count = [&](const std::string& key) {
    return static_cast<std::size_t>(
        parse_exact(require_key(kv, key, source), source + " " + key));
  };
  const std::size_t n_items = count("n_items");
  const std::size_t n_users = count("n_users");
  const bool has_item = count("item_weights") != 0;
  const bool has_user = count("user_weights") != 0;

  Hyperparams hp;
  hp.lambda1 = parse_exact(require_key(kv, "lambda1", source), source);
  hp.lambda2 = parse_exact(require_key(kv, "lambda2", source), source);
  hp.betas = parse_exact_list(require_key(kv, "betas", source), source);
  hp.gammas = parse_exact_list(require_key(kv, "gammas", source), source);
  hp.tie_lambdas = count("tie_lambdas") != 0;
  const std::uint64_t fingerprint =
      std::strtoull(require_key(kv, "fingerprint", source).c_str(), nullptr, 16);

  const std::size_t payload = (has_item ? n_items * n_items : 0) +
                              (has_user ? n_users * n_users : 0);
  if (16 + header_len + payload * 8 != checksum_at) {
    throw Error(ErrorCode::kCorruptModel,
                source + ": payload size does not match header dimensions");
  }
  std::size_t offset = 16 + header_len;
  auto read_matrix = [&](std::size_t n) {
    std::vector<double> values(n * n);
    for (double& v : values) {
      const std::uint64_t bits = get_u64(bytes + offset);
      std::memcpy(&v, &bits, sizeof v);
      offset += 8;
    }
    return DenseMatrix(n, n, std::move(values));
  };
  std::optional<DenseMatrix> b;
  std::optional<DenseMatrix> u;
  try {
    if (has_item) b = read_matrix(n_items);
    if (has_user) u = read_matrix(n_users);
    return WeightModel(std::move(b), std::move(u), std::move(hp), fingerprint);
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorruptModel, source + ": " + e.what());
  }
}

WeightModel load_model(const fs::path& path) {
  std::ifstream in = open_input(path, true);
  return read_model(in, path.string());
}

void write_params(std::ostream& out, const Hyperparams& hp,
                  std::optional<Method> method) {
  if (method) out << "method = " << to_string(*method) << '\n';
  out << "lambda1 = " << g17(hp.lambda1) << '\n'
      << "lambda2 = " << g17(hp.lambda2) << '\n'
      << "betas = " << g17_list(hp.betas) << '\n'
      << "gammas = " << g17_list(hp.gammas) << '\n'
      << "tie_lambdas = " << (hp.tie_lambdas ? "true" : "false") << '\n';
}

ParamsFile read_params(const fs::path& path) {
  std::ifstream in = open_input(path);
  ParamsFile p;
  for (const auto& kv : detail::read_key_values(in, path.string())) {
    const std::string ctx = where(path, kv.line);
    if (kv.key == "method") {
      p.method = parse_method(kv.value);
    } else if (kv.key == "lambda1") {
      p.hyperparams.lambda1 = parse_exact(kv.value, ctx);
    } else if (kv.key == "lambda2") {
      p.hyperparams.lambda2 = parse_exact(kv.value, ctx);
    } else if (kv.key == "betas") {
      p.hyperparams.betas = parse_exact_list(kv.value, ctx);
    } else if (kv.key == "gammas") {
      p.hyperparams.gammas = parse_exact_list(kv.value, ctx);
    } else if (kv.key == "tie_lambdas") {
      p.hyperparams.tie_lambdas = detail::parse_bool(kv.value, ctx);
    } else {
      throw Error(ErrorCode::kParseError, ctx + ": unknown key '" + kv.key + "'");
    }
  }
  return p;
}

}  // namespace duet
