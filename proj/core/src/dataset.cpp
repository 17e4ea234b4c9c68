#include "glmcorr/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "glmcorr/errors.hpp"

namespace glmcorr {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

}  // namespace

int DataFrame::column(std::string_view key) const {
  const auto it = std::find(names.begin(), names.end(), key);
  if (it != names.end()) return static_cast<int>(it - names.begin());
  int idx = 0;
  const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), idx);
  if (ec == std::errc() && ptr == key.data() + key.size()) {
    if (idx >= 1 && idx <= cols()) return idx - 1;
    throw DataError("column index " + std::string(key) + " is out of range");
  }
  throw DataError("no column named '" + std::string(key) + "'");
}

Eigen::VectorXd DataFrame::get(std::string_view key) const { return values.col(column(key)); }

DataFrame parse_csv(std::istream& in, std::string_view source) {
  DataFrame df;
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split(t);
    auto where = [&] { return std::string(source) + ":" + std::to_string(lineno) + ": "; };
    if (!have_header) {
      for (auto f : fields) {
        std::string name = unquote(f);
        if (name.empty()) throw DataError(where() + "empty column name");
        if (std::find(df.names.begin(), df.names.end(), name) != df.names.end()) {
          throw DataError(where() + "duplicate column name '" + name + "'");
        }
        df.names.push_back(std::move(name));
      }
      have_header = true;
      continue;
    }
    if (fields.size() != df.names.size()) {
      throw DataError(where() + "expected " + std::to_string(df.names.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    std::vector<double> row(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const std::string_view f = fields[j];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), row[j]);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(row[j])) {
        throw DataError(where() + "column '" + df.names[j] + "': '" + std::string(f) + "' is not a finite number");
      }
    }
    rows.push_back(std::move(row));
  }
  if (!have_header) throw DataError(std::string(source) + ": no header row");
  if (rows.empty()) throw DataError(std::string(source) + ": no data rows");
  df.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(df.names.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < df.names.size(); ++j) df.values(i, j) = rows[i][j];
  }
  return df;
}

DataFrame read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open '" + path + "'");
  return parse_csv(in, path);
}

DesignMatrix build_design(const DataFrame& df, const std::vector<std::string>& covariates, bool intercept) {
  const int k = static_cast<int>(covariates.size()) + (intercept ? 1 : 0);
  if (k == 0) throw DataError("design has no columns");
  Eigen::MatrixXd x(df.rows(), k);
  std::vector<std::string> names;
  int j = 0;
  if (intercept) {
    x.col(j++).setOnes();
    names.emplace_back("(Intercept)");
  }
  for (const std::string& c : covariates) {
    const int idx = df.column(c);
    x.col(j++) = df.values.col(idx);
    names.push_back(df.names[idx]);
  }
  return DesignMatrix(std::move(x), std::move(names));
}

}  // namespace glmcorr
