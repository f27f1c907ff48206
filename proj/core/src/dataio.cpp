#include "mdpd/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "mdpd/error.hpp"
#include "mdpd/family.hpp"

namespace mdpd {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Comma-separated fields with optional double quoting.
std::vector<std::string> split_fields(const std::string& line, std::size_t row) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? cur : trim(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  if (quoted) throw DataError(DataError::Reason::Malformed, row, "unterminated quote in row " + std::to_string(row));
  fields.push_back(was_quoted ? cur : trim(cur));
  return fields;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table read_table(std::istream& in) {
  Table t;
  std::string line;
  bool have_header = false;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!have_header) {
      if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
      if (trim(line).empty()) continue;
      t.header = split_fields(line, 0);
      have_header = true;
      continue;
    }
    ++row;
    if (trim(line).empty()) {
      // trailing blank lines are tolerated; interior ones become missing values
      t.rows.emplace_back();
      continue;
    }
    auto fields = split_fields(line, row);
    if (fields.size() > t.header.size())
      throw DataError(DataError::Reason::Malformed, row,
                      "row " + std::to_string(row) + " has " + std::to_string(fields.size()) + " fields, header has " +
                          std::to_string(t.header.size()));
    t.rows.push_back(std::move(fields));
  }
  if (!have_header) throw DataError(DataError::Reason::Malformed, 0, "CSV has no header row");
  while (!t.rows.empty() && t.rows.back().empty()) t.rows.pop_back();
  return t;
}

enum class CellKind { Value, Missing, NonNumeric, Negative };

CellKind parse_cell(const std::vector<std::string>& row, std::size_t col, double& value) {
  if (col >= row.size() || row[col].empty()) return CellKind::Missing;
  const std::string& s = row[col];
  static const char* const missing_tokens[] = {"NA", "na", "N/A", "NaN", "nan", "null", "NULL"};
  for (const char* tok : missing_tokens)
    if (s == tok) return CellKind::Missing;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) return CellKind::NonNumeric;
  if (value < 0.0) return CellKind::Negative;
  return CellKind::Value;
}

Sample column_sample(const Table& t, std::size_t col, const std::string& label) {
  std::vector<double> values;
  std::size_t dry = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::size_t row = r + 1;
    double v = 0.0;
    switch (parse_cell(t.rows[r], col, v)) {
      case CellKind::Missing:
        throw DataError(DataError::Reason::MissingValue, row, "missing value in column '" + t.header[col] + "' at row " + std::to_string(row));
      case CellKind::NonNumeric:
        throw DataError(DataError::Reason::NonNumeric, row,
                        "non-numeric value '" + t.rows[r][col] + "' in column '" + t.header[col] + "' at row " + std::to_string(row));
      case CellKind::Negative:
        throw DataError(DataError::Reason::NegativeValue, row,
                        "negative value " + t.rows[r][col] + " in column '" + t.header[col] + "' at row " + std::to_string(row));
      case CellKind::Value:
        if (v == 0.0)
          ++dry;
        else
          values.push_back(v);
        break;
    }
  }
  return Sample(std::move(values), dry, label);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(DataError::Reason::MissingFile, 0, "cannot open " + path.string());
  return in;
}

double quantile_sorted(const std::vector<double>& v, double p) {
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

Sample read_csv(std::istream& in, const std::string& column, const std::string& label) {
  const Table t = read_table(in);
  const auto it = std::find(t.header.begin(), t.header.end(), column);
  if (it == t.header.end()) throw DataError(DataError::Reason::MissingColumn, 0, "column '" + column + "' not found");
  return column_sample(t, static_cast<std::size_t>(it - t.header.begin()), label.empty() ? column : label);
}

Sample load_csv(const std::filesystem::path& path, const std::string& column) {
  auto in = open_input(path);
  return read_csv(in, column, column);
}

void write_csv(std::ostream& out, const Sample& sample, const std::string& column) {
  out << column << '\n';
  char buf[32];
  for (double v : sample.values()) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf) << '\n';
  }
  for (std::size_t i = 0; i < sample.dry_count(); ++i) out << "0\n";
}

void save_csv(const std::filesystem::path& path, const Sample& sample, const std::string& column) {
  std::ofstream out(path);
  if (!out) throw DataError(DataError::Reason::MissingFile, 0, "cannot write " + path.string());
  write_csv(out, sample, column);
}

std::vector<PanelSeries> read_panel(std::istream& in) {
  const Table t = read_table(in);
  std::vector<PanelSeries> out;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (t.header[c] == "year") continue;
    PanelSeries s;
    s.label = t.header[c];
    try {
      s.sample = column_sample(t, c, s.label);
    } catch (const Error& e) {
      s.error = e.what();
    }
    out.push_back(std::move(s));
  }
  if (out.empty()) throw DataError(DataError::Reason::MissingColumn, 0, "panel has no series columns");
  return out;
}

std::vector<PanelSeries> load_panel(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_panel(in);
}

double empirical_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw InsufficientDataError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, p);
}

OutlierSummary outlier_summary(const Sample& sample) {
  if (sample.size() < 4) throw InsufficientDataError("outlier summary needs at least 4 positive values");
  const std::vector<double> v = sample.sorted_values();
  OutlierSummary s;
  s.q1 = quantile_sorted(v, 0.25);
  s.q3 = quantile_sorted(v, 0.75);
  s.iqr = s.q3 - s.q1;
  s.lower_fence = s.q1 - 1.5 * s.iqr;
  s.upper_fence = s.q3 + 1.5 * s.iqr;
  const auto outside = std::count_if(v.begin(), v.end(), [&](double x) { return x < s.lower_fence || x > s.upper_fence; });
  s.outlier_proportion = 100.0 * static_cast<double>(outside) / static_cast<double>(v.size());
  return s;
}

double adjusted_median(const FitResult& fit, std::size_t dry_count, std::size_t n_wet) {
  if (!fit.converged) throw DomainError("adjusted median needs a converged fit");
  const std::size_t total = dry_count + n_wet;
  if (total == 0) throw InsufficientDataError("adjusted median of an empty record");
  const double p = static_cast<double>(dry_count) / static_cast<double>(total);
  if (p >= 0.5) return 0.0;
  if (dry_count == 0) return quantile(fit.theta_hat, 0.5);
  return quantile(fit.theta_hat, (0.5 - p) / (1.0 - p));
}

}  // namespace mdpd
