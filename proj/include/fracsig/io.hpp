#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fracsig/path.hpp"
#include "fracsig/words.hpp"

namespace fracsig::io {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

/// Strict parse of a whole field; throws FormatError on trailing junk.
double parse_double(std::string_view field);

std::vector<std::string_view> split_csv_line(std::string_view line);

/// One row per knot, d numeric columns. A first row that does not parse as
/// numbers is taken as a header.
PiecewiseLinearPath read_path_csv(std::istream& in);
PiecewiseLinearPath read_path_csv(const std::filesystem::path& file);

/// Header `s_1,...` over levels 1..L and one row of values.
void write_signature_csv(std::ostream& out, const TruncatedSignature& sig);

}  // namespace fracsig::io
