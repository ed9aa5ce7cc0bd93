#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracsig/alpha.hpp"
#include "fracsig/path.hpp"

namespace fracsig::features {

inline constexpr std::size_t image_side = 28;
inline constexpr std::size_t image_pixels = image_side * image_side;
inline constexpr std::uint32_t images_magic = 2051;
inline constexpr std::uint32_t labels_magic = 2049;

struct DigitImage {
    std::array<std::uint8_t, image_pixels> pixels{};
};

struct LabeledDigit {
    DigitImage image;
    int label = 0;
};

/// Parses an IDX image/label pair. `limit` keeps only the first records.
/// Errors name the byte offset at which the file stops making sense.
std::vector<LabeledDigit> load_idx(const std::filesystem::path& images_file,
                                   const std::filesystem::path& labels_file,
                                   std::optional<std::size_t> limit = std::nullopt);
std::vector<DigitImage> read_idx_images(std::istream& in, const std::string& name);
std::vector<int> read_idx_labels(std::istream& in, const std::string& name);

/// Knot i = (i / 28, i % 28, pixel_i) on [0, 783], pixels taken raw.
PiecewiseLinearPath embed_digit(const DigitImage& image);

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct FeatureMatrix {
    std::size_t dim = 3;
    std::size_t level = 0;
    std::vector<int> labels;
    Matrix values;  // samples × feature_count(dim, level)

    std::size_t rows() const { return labels.size(); }
    std::size_t columns() const { return static_cast<std::size_t>(values.cols()); }
};

struct StandardizationStats {
    std::vector<double> mean;
    std::vector<double> sd;  // population; 0 marks a column that is only centred
};

inline constexpr std::size_t default_level_cap = 7;

struct ExtractOptions {
    std::size_t threads = 1;
    bool allow_deep = false;  // lift the L <= 7 cost guard
};

/// Row m holds the discrete signature of embed_digit(dataset[m]), levels 1..L.
FeatureMatrix extract_features(const std::vector<LabeledDigit>& dataset, Alpha alpha, std::size_t L,
                               const ExtractOptions& options = {});

struct Standardized {
    FeatureMatrix train;
    FeatureMatrix test;
    StandardizationStats stats;
};

/// Column z-scores from the train mean and population deviation, applied to both.
Standardized standardize(const FeatureMatrix& train, const FeatureMatrix& test);
StandardizationStats fit_standardization(const FeatureMatrix& train);
void apply_standardization(FeatureMatrix& matrix, const StandardizationStats& stats);

/// `<file>` gets `label,s_1,...` plus one row per sample; `<file>.stats`
/// gets a header and the rows `mean,...` and `std,...`.
void export_features(const FeatureMatrix& matrix, const StandardizationStats& stats,
                     const std::filesystem::path& file);
std::filesystem::path stats_path(const std::filesystem::path& file);

struct ImportedFeatures {
    FeatureMatrix matrix;
    std::optional<StandardizationStats> stats;
};
ImportedFeatures import_features(const std::filesystem::path& file);

}  // namespace fracsig::features
