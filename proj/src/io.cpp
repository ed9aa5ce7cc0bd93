#include "fracsig/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fracsig/errors.hpp"

namespace fracsig::io {

std::string format_double(double x)
{
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) throw FormatError("cannot format value");
    return std::string(buf.data(), end);
}

double parse_double(std::string_view field)
{
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        throw FormatError("not a number: '" + std::string(field) + "'");
    }
    return value;
}

std::vector<std::string_view> split_csv_line(std::string_view line)
{
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

PiecewiseLinearPath read_path_csv(std::istream& in)
{
    std::string line;
    std::vector<double> values;
    std::size_t dim = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = split_csv_line(line);
        std::vector<double> row;
        row.reserve(fields.size());
        try {
            for (auto f : fields) row.push_back(parse_double(f));
        } catch (const FormatError& e) {
            if (rows == 0 && dim == 0) {
                dim = fields.size();  // header
                continue;
            }
            throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (dim == 0) dim = row.size();
        if (row.size() != dim) {
            throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(dim) + " columns, got " +
                              std::to_string(row.size()));
        }
        values.insert(values.end(), row.begin(), row.end());
        ++rows;
    }
    if (rows < 2) throw FormatError("path CSV needs at least two knots");
    return PiecewiseLinearPath(rows, dim, std::move(values));
}

PiecewiseLinearPath read_path_csv(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in) throw FormatError("cannot open " + file.string());
    try {
        return read_path_csv(in);
    } catch (const FormatError& e) {
        throw FormatError(file.string() + ": " + e.what());
    }
}

void write_signature_csv(std::ostream& out, const TruncatedSignature& sig)
{
    const auto words = enumerate_words(sig.dim(), sig.level());
    bool first = true;
    for (const auto& w : words) {
        if (w.channels.empty()) continue;
        out << (first ? "" : ",") << word_column_name(w);
        first = false;
    }
    out << '\n';
    first = true;
    for (double v : sig.features()) {
        out << (first ? "" : ",") << format_double(v);
        first = false;
    }
    out << '\n';
}

}  // namespace fracsig::io
