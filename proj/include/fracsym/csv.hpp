#pragma once

// Plain CSV for grid functions: `#`-prefixed metadata lines, one header line,
// 17 significant digits, '.' decimal point regardless of locale.

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fracsym/grid.hpp"

namespace fracsym {

using CsvMetadata = std::vector<std::pair<std::string, std::string>>;

std::string format_double(double x, int significant_digits = 17);
/// Strict parse of a full token; throws IoError on trailing garbage.
double parse_double(std::string_view token);

/// Header `t,<value_name>`. Reduced-accuracy nodes get a third `reduced`
/// column when the function carries flags.
void write_csv(std::ostream& os, const GridFunction1D<double>& f, const CsvMetadata& meta = {},
               const std::string& value_name = "f");
/// Header `x1,x2,<value_name>`, rows ordered x2-outer, x1-inner.
void write_csv(std::ostream& os, const GridFunction2D<double>& u, const CsvMetadata& meta = {},
               const std::string& value_name = "u");

struct Csv1D {
  GridFunction1D<double> function;
  CsvMetadata metadata;
};
struct Csv2D {
  GridFunction2D<double> function;
  CsvMetadata metadata;
};

/// Reads a 1D file; the t column must be a uniform grid (relative tolerance 1e-9).
Csv1D read_csv_1d(std::istream& is);
Csv2D read_csv_2d(std::istream& is);

void write_csv_file(const std::string& path, const GridFunction1D<double>& f,
                    const CsvMetadata& meta = {}, const std::string& value_name = "f");
void write_csv_file(const std::string& path, const GridFunction2D<double>& u,
                    const CsvMetadata& meta = {}, const std::string& value_name = "u");
Csv1D read_csv_1d_file(const std::string& path);
Csv2D read_csv_2d_file(const std::string& path);

}  // namespace fracsym
