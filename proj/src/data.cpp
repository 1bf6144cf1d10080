#include "mvsc/data.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "mvsc/error.hpp"

namespace mvsc {
namespace fs = std::filesystem;

MultiViewDataset::MultiViewDataset(std::vector<Matrix> views, std::optional<Labels> labels,
                                   std::vector<std::string> view_names, std::string name)
    : views_(std::move(views)),
      labels_(std::move(labels)),
      view_names_(std::move(view_names)),
      name_(std::move(name)) {
  if (views_.empty()) throw DataError("dataset has no views");
  const Eigen::Index n = views_.front().rows();
  if (n < 2) throw DataError("dataset needs at least 2 samples, got " + std::to_string(n));
  for (std::size_t i = 0; i < views_.size(); ++i) {
    const Matrix& x = views_[i];
    if (x.rows() != n)
      throw DataError("row-count mismatch: view 0 has " + std::to_string(n) + " rows, view " +
                      std::to_string(i) + " has " + std::to_string(x.rows()));
    if (x.cols() < 1) throw DataError("view " + std::to_string(i) + " has no features");
    if (!x.allFinite()) throw DataError("view " + std::to_string(i) + " contains NaN or Inf");
  }
  if (!view_names_.empty() && view_names_.size() != views_.size())
    throw DataError("view_names length does not match number of views");
  if (labels_) {
    const Labels& y = *labels_;
    if (static_cast<Eigen::Index>(y.size()) != n)
      throw DataError("labels length mismatch: expected " + std::to_string(n) + ", got " +
                      std::to_string(y.size()));
    const int k = *std::max_element(y.begin(), y.end()) + 1;
    std::vector<bool> seen(static_cast<std::size_t>(std::max(k, 0)), false);
    for (int c : y) {
      if (c < 0) throw DataError("negative class id in labels");
      seen[static_cast<std::size_t>(c)] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      throw DataError("labels must use every class id in [0, K)");
  }
}

int MultiViewDataset::num_classes() const {
  if (!labels_) throw DataError("dataset has no labels");
  return *std::max_element(labels_->begin(), labels_->end()) + 1;
}

Normalization parse_normalization(const std::string& s) {
  if (s == "none") return Normalization::None;
  if (s == "unit_row_norm") return Normalization::UnitRowNorm;
  if (s == "zscore_columns") return Normalization::ZscoreColumns;
  throw InvalidArgument("unknown normalization mode: " + s);
}

std::string to_string(Normalization n) {
  switch (n) {
    case Normalization::None: return "none";
    case Normalization::UnitRowNorm: return "unit_row_norm";
    case Normalization::ZscoreColumns: return "zscore_columns";
  }
  return "none";
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::vector<std::string>> read_cells(const fs::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool skipped = !has_header;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (!skipped) {
      skipped = true;
      continue;
    }
    std::vector<std::string> cells;
    std::string_view rest(line);
    for (;;) {
      const auto pos = rest.find(',');
      cells.emplace_back(trim(rest.substr(0, pos)));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

[[noreturn]] void bad_cell(const fs::path& path, std::size_t row, const std::string& cell) {
  throw DataError(path.string() + ": non-numeric cell '" + cell + "' in data row " +
                  std::to_string(row + 1));
}

}  // namespace

Matrix read_csv_matrix(const fs::path& path, bool has_header) {
  const auto rows = read_cells(path, has_header);
  if (rows.empty()) throw DataError(path.string() + ": no data rows");
  const std::size_t d = rows.front().size();
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != d)
      throw DataError(path.string() + ": ragged rows (row " + std::to_string(r + 1) + " has " +
                      std::to_string(rows[r].size()) + " cells, expected " + std::to_string(d) +
                      ")");
    for (std::size_t c = 0; c < d; ++c) {
      const std::string& cell = rows[r][c];
      double v = 0.0;
      const char* end = cell.data() + cell.size();
      auto [p, ec] = std::from_chars(cell.data(), end, v);
      if (ec != std::errc() || p != end || cell.empty()) bad_cell(path, r, cell);
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return m;
}

Labels read_csv_labels(const fs::path& path, bool has_header) {
  const auto rows = read_cells(path, has_header);
  Labels out;
  out.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != 1)
      throw DataError(path.string() + ": labels file must hold one integer per row");
    const std::string& cell = rows[r][0];
    long v = 0;
    const char* end = cell.data() + cell.size();
    auto [p, ec] = std::from_chars(cell.data(), end, v);
    if (ec != std::errc() || p != end || cell.empty()) bad_cell(path, r, cell);
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void write_csv_matrix(const fs::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  char buf[64];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, m(r, c));
      out.write(buf, p - buf);
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Manifest

MultiViewDataset load_dataset(const fs::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot open manifest " + manifest_path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("invalid manifest JSON: " + std::string(e.what()));
  }
  const fs::path base = manifest_path.parent_path();
  auto resolve = [&](const std::string& p) {
    const fs::path q(p);
    return q.is_absolute() ? q : base / q;
  };

  if (!j.contains("views") || !j["views"].is_array() || j["views"].empty())
    throw DataError("manifest must contain a non-empty 'views' array");

  std::vector<Matrix> views;
  std::vector<std::string> names;
  for (const auto& v : j["views"]) {
    if (!v.contains("path")) throw DataError("manifest view entry missing 'path'");
    const std::string p = v["path"].get<std::string>();
    const bool header = v.value("has_header", false);
    const fs::path full = resolve(p);
    if (!fs::exists(full)) throw DataError("missing file: " + full.string());
    views.push_back(read_csv_matrix(full, header));
    names.push_back(v.value("name", fs::path(p).stem().string()));
  }

  std::optional<Labels> labels;
  if (j.contains("labels") && !j["labels"].is_null()) {
    bool header = false;
    std::string p;
    if (j["labels"].is_object()) {
      p = j["labels"].at("path").get<std::string>();
      header = j["labels"].value("has_header", false);
    } else {
      p = j["labels"].get<std::string>();
    }
    const fs::path full = resolve(p);
    if (!fs::exists(full)) throw DataError("missing file: " + full.string());
    Labels raw = read_csv_labels(full, header);
    std::set<int> distinct(raw.begin(), raw.end());
    std::map<int, int> rank;
    for (int c : distinct) rank.emplace(c, static_cast<int>(rank.size()));
    for (int& c : raw) c = rank.at(c);
    labels = std::move(raw);
  }

  return MultiViewDataset(std::move(views), std::move(labels), std::move(names),
                          j.value("name", manifest_path.stem().string()));
}

fs::path write_dataset(const MultiViewDataset& ds, const fs::path& dir) {
  fs::create_directories(dir);
  nlohmann::json j;
  j["name"] = ds.name();
  j["views"] = nlohmann::json::array();
  for (std::size_t i = 0; i < ds.num_views(); ++i) {
    const std::string file = "view" + std::to_string(i) + ".csv";
    write_csv_matrix(dir / file, ds.view(i));
    nlohmann::json v{{"path", file}, {"has_header", false}};
    if (!ds.view_names().empty()) v["name"] = ds.view_names()[i];
    j["views"].push_back(v);
  }
  if (ds.has_labels()) {
    std::ofstream out(dir / "labels.csv");
    for (int c : *ds.labels()) out << c << '\n';
    j["labels"] = "labels.csv";
  } else {
    j["labels"] = nullptr;
  }
  const fs::path manifest = dir / "manifest.json";
  std::ofstream(manifest) << j.dump(2) << '\n';
  return manifest;
}

// ---------------------------------------------------------------------------
// Synthetic data and normalization

MultiViewDataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.k < 2) throw InvalidArgument("synthetic spec: k must be >= 2");
  if (spec.n_per_cluster < 1) throw InvalidArgument("synthetic spec: n_per_cluster must be >= 1");
  if (spec.subspace_dim < 1) throw InvalidArgument("synthetic spec: subspace_dim must be >= 1");
  if (spec.view_dims.empty()) throw InvalidArgument("synthetic spec: no views");
  if (!(spec.noise_sigma >= 0.0)) throw InvalidArgument("synthetic spec: noise_sigma must be >= 0");
  for (int d : spec.view_dims)
    if (spec.subspace_dim >= d)
      throw InvalidArgument("synthetic spec: subspace_dim must be smaller than every view dim");

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  const Eigen::Index n = static_cast<Eigen::Index>(spec.k) * spec.n_per_cluster;
  std::vector<Matrix> views;
  for (int d : spec.view_dims) {
    Matrix x(n, d);
    for (int c = 0; c < spec.k; ++c) {
      Matrix g(d, spec.subspace_dim);
      for (Eigen::Index j = 0; j < g.cols(); ++j)
        for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = gauss(rng);
      Eigen::HouseholderQR<Matrix> qr(g);
      const Matrix basis = qr.householderQ() * Matrix::Identity(d, spec.subspace_dim);
      for (int s = 0; s < spec.n_per_cluster; ++s) {
        Vector coef(spec.subspace_dim);
        for (Eigen::Index t = 0; t < coef.size(); ++t) coef(t) = unif(rng);
        const Eigen::Index row = static_cast<Eigen::Index>(c) * spec.n_per_cluster + s;
        x.row(row) = (basis * coef).transpose();
        if (spec.noise_sigma > 0.0)
          for (Eigen::Index f = 0; f < d; ++f) x(row, f) += spec.noise_sigma * gauss(rng);
      }
    }
    views.push_back(std::move(x));
  }

  Labels labels(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = static_cast<int>(i / spec.n_per_cluster);
  return MultiViewDataset(std::move(views), std::move(labels), {}, "synthetic");
}

MultiViewDataset normalize_views(const MultiViewDataset& ds, Normalization mode) {
  if (mode == Normalization::None) return ds;
  std::vector<Matrix> out;
  for (const Matrix& x : ds.views()) {
    Matrix y = x;
    if (mode == Normalization::UnitRowNorm) {
      for (Eigen::Index r = 0; r < y.rows(); ++r) {
        const double nrm = y.row(r).norm();
        if (nrm > 0.0) y.row(r) /= nrm;
      }
    } else {
      const double n = static_cast<double>(y.rows());
      for (Eigen::Index c = 0; c < y.cols(); ++c) {
        const double mean = y.col(c).mean();
        y.col(c).array() -= mean;
        const double sd = std::sqrt(y.col(c).squaredNorm() / n);
        if (sd > 0.0) y.col(c) /= sd;
      }
    }
    out.push_back(std::move(y));
  }
  return MultiViewDataset(std::move(out), ds.labels(), ds.view_names(), ds.name());
}

}  // namespace mvsc
