#include "fracsig/features.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "fracsig/discrete.hpp"
#include "fracsig/errors.hpp"
#include "fracsig/io.hpp"
#include "fracsig/words.hpp"

namespace fracsig::features {

namespace {

std::uint32_t read_be32(std::istream& in, const std::string& name, std::size_t offset)
{
    std::array<unsigned char, 4> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 4)) {
        throw FormatError(name + ": truncated header at byte " + std::to_string(offset));
    }
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

void expect_magic(std::uint32_t got, std::uint32_t want, const std::string& name)
{
    if (got == want) return;
    std::ostringstream os;
    os << name << ": bad magic " << got << " at byte 0 (expected " << want << ")";
    if (got == __builtin_bswap32(want)) os << "; file looks byte-swapped";
    throw FormatError(os.str());
}

std::ifstream open_binary(const std::filesystem::path& file)
{
    std::ifstream in(file, std::ios::binary);
    if (!in) throw FormatError("cannot open " + file.string());
    return in;
}

}  // namespace

std::vector<DigitImage> read_idx_images(std::istream& in, const std::string& name)
{
    expect_magic(read_be32(in, name, 0), images_magic, name);
    const std::uint32_t count = read_be32(in, name, 4);
    const std::uint32_t rows = read_be32(in, name, 8);
    const std::uint32_t cols = read_be32(in, name, 12);
    if (rows != image_side || cols != image_side) {
        throw FormatError(name + ": images at byte 8 are " + std::to_string(rows) + "x" + std::to_string(cols) +
                          ", expected 28x28");
    }
    std::vector<DigitImage> out(count);
    for (std::uint32_t m = 0; m < count; ++m) {
        auto& px = out[m].pixels;
        if (!in.read(reinterpret_cast<char*>(px.data()), image_pixels)) {
            const std::size_t offset = 16 + static_cast<std::size_t>(m) * image_pixels + static_cast<std::size_t>(in.gcount());
            throw FormatError(name + ": truncated payload at byte " + std::to_string(offset) + " (image " +
                              std::to_string(m) + " of " + std::to_string(count) + ")");
        }
    }
    return out;
}

std::vector<int> read_idx_labels(std::istream& in, const std::string& name)
{
    expect_magic(read_be32(in, name, 0), labels_magic, name);
    const std::uint32_t count = read_be32(in, name, 4);
    std::vector<unsigned char> raw(count);
    if (!in.read(reinterpret_cast<char*>(raw.data()), count)) {
        throw FormatError(name + ": truncated payload at byte " + std::to_string(8 + in.gcount()) + " (" +
                          std::to_string(count) + " labels declared)");
    }
    return std::vector<int>(raw.begin(), raw.end());
}

std::vector<LabeledDigit> load_idx(const std::filesystem::path& images_file,
                                   const std::filesystem::path& labels_file, std::optional<std::size_t> limit)
{
    auto img_in = open_binary(images_file);
    auto lab_in = open_binary(labels_file);
    auto images = read_idx_images(img_in, images_file.string());
    auto labels = read_idx_labels(lab_in, labels_file.string());
    if (images.size() != labels.size()) {
        throw FormatError("count mismatch: " + images_file.string() + " holds " + std::to_string(images.size()) +
                          " images (count at byte 4), " + labels_file.string() + " holds " +
                          std::to_string(labels.size()) + " labels");
    }
    const std::size_t keep = limit ? std::min(*limit, images.size()) : images.size();
    std::vector<LabeledDigit> out(keep);
    for (std::size_t m = 0; m < keep; ++m) out[m] = LabeledDigit{images[m], labels[m]};
    return out;
}

PiecewiseLinearPath embed_digit(const DigitImage& image)
{
    std::vector<double> values(image_pixels * 3);
    for (std::size_t i = 0; i < image_pixels; ++i) {
        values[3 * i] = static_cast<double>(i / image_side);
        values[3 * i + 1] = static_cast<double>(i % image_side);
        values[3 * i + 2] = static_cast<double>(image.pixels[i]);
    }
    return PiecewiseLinearPath(image_pixels, 3, std::move(values));
}

FeatureMatrix extract_features(const std::vector<LabeledDigit>& dataset, Alpha alpha, std::size_t L,
                               const ExtractOptions& options)
{
    if (L < 1) throw DomainError("feature level must be at least 1");
    if (L > default_level_cap && !options.allow_deep) {
        throw DomainError("level " + std::to_string(L) + " exceeds the cost guard of " +
                          std::to_string(default_level_cap));
    }
    FeatureMatrix out;
    out.level = L;
    out.labels.reserve(dataset.size());
    for (const auto& d : dataset) out.labels.push_back(d.label);
    out.values.resize(static_cast<Eigen::Index>(dataset.size()), static_cast<Eigen::Index>(feature_count(3, L)));

    auto fill = [&](std::size_t m) {
        const auto sig = discrete::discrete_signature(embed_digit(dataset[m].image), alpha, L);
        const auto f = sig.features();
        std::copy(f.begin(), f.end(), out.values.row(static_cast<Eigen::Index>(m)).data());
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(options.threads, dataset.size()));
    if (workers == 1) {
        for (std::size_t m = 0; m < dataset.size(); ++m) fill(m);
        return out;
    }
    // Each row is written by exactly one worker, so row order never depends on scheduling.
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t m = next++; m < dataset.size(); m = next++) {
                try {
                    fill(m);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

StandardizationStats fit_standardization(const FeatureMatrix& train)
{
    const auto cols = train.values.cols();
    StandardizationStats stats;
    stats.mean.assign(static_cast<std::size_t>(cols), 0.0);
    stats.sd.assign(static_cast<std::size_t>(cols), 0.0);
    const auto rows = train.values.rows();
    if (rows == 0) return stats;
    for (Eigen::Index j = 0; j < cols; ++j) {
        const auto col = train.values.col(j);
        double mean = col.mean();
        mean += (col.array() - mean).mean();  // one refinement step; removes the rounding of a large mean
        const double var = (col.array() - mean).square().mean();
        double sd = std::sqrt(var);
        if (sd <= 1e-12 * std::max(1.0, std::fabs(mean))) sd = 0.0;
        stats.mean[static_cast<std::size_t>(j)] = mean;
        stats.sd[static_cast<std::size_t>(j)] = sd;
    }
    return stats;
}

void apply_standardization(FeatureMatrix& matrix, const StandardizationStats& stats)
{
    const auto cols = static_cast<std::size_t>(matrix.values.cols());
    if (stats.mean.size() != cols || stats.sd.size() != cols) {
        throw DomainError("standardization statistics have " + std::to_string(stats.mean.size()) +
                          " columns, matrix has " + std::to_string(cols));
    }
    for (std::size_t j = 0; j < cols; ++j) {
        auto col = matrix.values.col(static_cast<Eigen::Index>(j));
        col.array() -= stats.mean[j];
        if (stats.sd[j] > 0.0) col /= stats.sd[j];
    }
}

Standardized standardize(const FeatureMatrix& train, const FeatureMatrix& test)
{
    if (train.values.cols() != test.values.cols()) {
        throw DomainError("train has " + std::to_string(train.values.cols()) + " columns, test has " +
                          std::to_string(test.values.cols()));
    }
    Standardized out{train, test, fit_standardization(train)};
    apply_standardization(out.train, out.stats);
    apply_standardization(out.test, out.stats);
    return out;
}

std::filesystem::path stats_path(const std::filesystem::path& file)
{
    auto out = file;
    out.replace_extension(".stats");
    return out;
}

namespace {

std::vector<std::string> column_names(std::size_t dim, std::size_t level)
{
    std::vector<std::string> out;
    if (level == 0) return out;
    for (const auto& w : enumerate_words(dim, level)) out.push_back(word_column_name(w));
    return out;
}

void write_row(std::ostream& out, const std::string& lead, const double* values, std::size_t n)
{
    out << lead;
    for (std::size_t j = 0; j < n; ++j) out << ',' << io::format_double(values[j]);
    out << '\n';
}

std::ofstream open_out(const std::filesystem::path& file)
{
    std::ofstream out(file, std::ios::binary);
    if (!out) throw FormatError("cannot write " + file.string());
    return out;
}

// Infers (dim, level) from a column count; d = 3 is the embedding's dimension.
std::size_t level_for_columns(std::size_t dim, std::size_t columns, const std::string& name)
{
    std::size_t level = 0;
    while (feature_count(dim, level) < columns) ++level;
    if (feature_count(dim, level) != columns) {
        throw FormatError(name + ": " + std::to_string(columns) + " feature columns is not a full truncation");
    }
    return level;
}

}  // namespace

void export_features(const FeatureMatrix& matrix, const StandardizationStats& stats,
                     const std::filesystem::path& file)
{
    const auto names = column_names(matrix.dim, matrix.level);
    if (names.size() != matrix.columns()) throw DomainError("feature matrix columns do not match its level");
    {
        auto out = open_out(file);
        out << "label";
        for (const auto& n : names) out << ',' << n;
        out << '\n';
        for (std::size_t m = 0; m < matrix.rows(); ++m) {
            write_row(out, std::to_string(matrix.labels[m]), matrix.values.row(static_cast<Eigen::Index>(m)).data(),
                      names.size());
        }
        if (!out.flush()) throw FormatError("write failed for " + file.string());
    }
    if (stats.mean.size() != names.size() || stats.sd.size() != names.size()) {
        throw DomainError("standardization statistics do not match the feature columns");
    }
    const auto side = stats_path(file);
    auto out = open_out(side);
    out << "stat";
    for (const auto& n : names) out << ',' << n;
    out << '\n';
    write_row(out, "mean", stats.mean.data(), names.size());
    write_row(out, "std", stats.sd.data(), names.size());
    if (!out.flush()) throw FormatError("write failed for " + side.string());
}

ImportedFeatures import_features(const std::filesystem::path& file)
{
    std::ifstream in(file, std::ios::binary);
    if (!in) throw FormatError("cannot open " + file.string());
    const std::string name = file.string();
    std::string line;
    if (!std::getline(in, line)) throw FormatError(name + ": empty file");
    const auto header = io::split_csv_line(line);
    if (header.empty() || header[0] != "label") throw FormatError(name + ": header must start with 'label'");
    const std::size_t columns = header.size() - 1;

    ImportedFeatures out;
    out.matrix.dim = 3;
    out.matrix.level = level_for_columns(3, columns, name);
    const auto expected = column_names(3, out.matrix.level);
    for (std::size_t j = 0; j < columns; ++j) {
        if (header[j + 1] != expected[j]) {
            throw FormatError(name + ": column " + std::to_string(j + 1) + " is '" + std::string(header[j + 1]) +
                              "', expected '" + expected[j] + "'");
        }
    }

    std::vector<double> flat;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = io::split_csv_line(line);
        if (fields.size() != header.size()) {
            throw FormatError(name + ": line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                              " fields, expected " + std::to_string(header.size()));
        }
        try {
            out.matrix.labels.push_back(static_cast<int>(io::parse_double(fields[0])));
            for (std::size_t j = 1; j < fields.size(); ++j) flat.push_back(io::parse_double(fields[j]));
        } catch (const FormatError& e) {
            throw FormatError(name + ": line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    out.matrix.values = Eigen::Map<Matrix>(flat.data(), static_cast<Eigen::Index>(out.matrix.labels.size()),
                                           static_cast<Eigen::Index>(columns));

    const auto side = stats_path(file);
    std::ifstream sin(side, std::ios::binary);
    if (sin) {
        StandardizationStats stats;
        std::getline(sin, line);  // header
        for (const char* tag : {"mean", "std"}) {
            if (!std::getline(sin, line)) throw FormatError(side.string() + ": missing '" + tag + "' row");
            const auto fields = io::split_csv_line(line);
            if (fields.size() != header.size() || fields[0] != tag) {
                throw FormatError(side.string() + ": malformed '" + tag + "' row");
            }
            auto& dst = std::string_view(tag) == "mean" ? stats.mean : stats.sd;
            for (std::size_t j = 1; j < fields.size(); ++j) dst.push_back(io::parse_double(fields[j]));
        }
        out.stats = std::move(stats);
    }
    return out;
}

}  // namespace fracsig::features
