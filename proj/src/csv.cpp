#include "fracsym/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fracsym/errors.hpp"

namespace fracsym {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void write_metadata(std::ostream& os, const CsvMetadata& meta) {
  for (const auto& [key, value] : meta) os << "# " << key << ": " << value << '\n';
}

struct Table {
  CsvMetadata metadata;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Table read_table(std::istream& is) {
  Table table;
  std::string line;
  bool have_header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      view.remove_prefix(1);
      const auto colon = view.find(':');
      if (colon == std::string_view::npos) {
        table.metadata.emplace_back(std::string(trim(view)), "");
      } else {
        table.metadata.emplace_back(std::string(trim(view.substr(0, colon))),
                                    std::string(trim(view.substr(colon + 1))));
      }
      continue;
    }
    if (!have_header) {
      for (auto cell : split(view)) table.header.emplace_back(cell);
      have_header = true;
      continue;
    }
    auto cells = split(view);
    if (cells.size() != table.header.size()) {
      throw IoError("csv line " + std::to_string(lineno) + ": expected " +
                    std::to_string(table.header.size()) + " columns");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (auto c : cells) row.push_back(parse_double(c));
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw IoError("csv: missing header line");
  return table;
}

UniformGrid1D<double> grid_from_nodes(const std::vector<double>& t) {
  if (t.size() < 2) throw IoError("csv: need at least 2 grid nodes");
  const auto n = static_cast<Eigen::Index>(t.size());
  const double a = t.front();
  const double h = (t.back() - a) / static_cast<double>(n - 1);
  if (!(h > 0.0)) throw IoError("csv: grid nodes must be increasing");
  for (Eigen::Index k = 0; k < n; ++k) {
    const double expected = a + static_cast<double>(k) * h;
    if (std::abs(t[static_cast<std::size_t>(k)] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw IoError("csv: grid nodes are not uniformly spaced");
    }
  }
  return UniformGrid1D<double>(a, h, n);
}

}  // namespace

std::string format_double(double x, int significant_digits) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, significant_digits);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw IoError("not a number: '" + std::string(token) + "'");
  }
  return value;
}

void write_csv(std::ostream& os, const GridFunction1D<double>& f, const CsvMetadata& meta,
               const std::string& value_name) {
  write_metadata(os, meta);
  const bool flags = !f.reduced.empty();
  os << "t," << value_name << (flags ? ",reduced" : "") << '\n';
  for (Eigen::Index k = 0; k < f.grid.count; ++k) {
    os << format_double(f.grid.node(k)) << ',' << format_double(f.samples(k));
    if (flags) os << ',' << (f.is_reduced(k) ? 1 : 0);
    os << '\n';
  }
}

void write_csv(std::ostream& os, const GridFunction2D<double>& u, const CsvMetadata& meta,
               const std::string& value_name) {
  write_metadata(os, meta);
  os << "x1,x2," << value_name << '\n';
  for (Eigen::Index j = 0; j < u.axis2.count; ++j) {
    const std::string x2 = format_double(u.axis2.node(j));
    for (Eigen::Index i = 0; i < u.axis1.count; ++i) {
      os << format_double(u.axis1.node(i)) << ',' << x2 << ',' << format_double(u.samples(i, j))
         << '\n';
    }
  }
}

Csv1D read_csv_1d(std::istream& is) {
  Table table = read_table(is);
  if (table.header.size() < 2 || table.header.size() > 3) {
    throw IoError("csv: 1D file needs columns t,<value>[,reduced]");
  }
  std::vector<double> t;
  Eigen::VectorXd values(static_cast<Eigen::Index>(table.rows.size()));
  std::vector<bool> reduced;
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    t.push_back(table.rows[k][0]);
    values(static_cast<Eigen::Index>(k)) = table.rows[k][1];
    if (table.header.size() == 3) reduced.push_back(table.rows[k][2] != 0.0);
  }
  Csv1D out{GridFunction1D<double>(grid_from_nodes(t), std::move(values)), std::move(table.metadata)};
  out.function.reduced = std::move(reduced);
  return out;
}

Csv2D read_csv_2d(std::istream& is) {
  Table table = read_table(is);
  if (table.header.size() != 3) throw IoError("csv: 2D file needs columns x1,x2,<value>");
  if (table.rows.empty()) throw IoError("csv: no data rows");
  const double x2_first = table.rows.front()[1];
  std::size_t n1 = 0;
  while (n1 < table.rows.size() && table.rows[n1][1] == x2_first) ++n1;
  if (n1 < 2 || table.rows.size() % n1 != 0) throw IoError("csv: 2D rows do not form a grid");
  const std::size_t n2 = table.rows.size() / n1;
  std::vector<double> x1, x2;
  for (std::size_t i = 0; i < n1; ++i) x1.push_back(table.rows[i][0]);
  for (std::size_t j = 0; j < n2; ++j) x2.push_back(table.rows[j * n1][1]);
  Eigen::MatrixXd s(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n2));
  for (std::size_t j = 0; j < n2; ++j) {
    for (std::size_t i = 0; i < n1; ++i) {
      const auto& row = table.rows[j * n1 + i];
      if (row[0] != x1[i] || row[1] != x2[j]) throw IoError("csv: 2D rows must be x2-outer, x1-inner");
      s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[2];
    }
  }
  return {GridFunction2D<double>(grid_from_nodes(x1), grid_from_nodes(x2), std::move(s)),
          std::move(table.metadata)};
}

void write_csv_file(const std::string& path, const GridFunction1D<double>& f,
                    const CsvMetadata& meta, const std::string& value_name) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_csv(os, f, meta, value_name);
  if (!os) throw IoError("write to '" + path + "' failed");
}

void write_csv_file(const std::string& path, const GridFunction2D<double>& u,
                    const CsvMetadata& meta, const std::string& value_name) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_csv(os, u, meta, value_name);
  if (!os) throw IoError("write to '" + path + "' failed");
}

Csv1D read_csv_1d_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  return read_csv_1d(is);
}

Csv2D read_csv_2d_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  return read_csv_2d(is);
}

}  // namespace fracsym
