#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "fracsig/classical.hpp"
#include "fracsig/discrete.hpp"
#include "fracsig/errors.hpp"
#include "fracsig/features.hpp"
#include "support.hpp"

using namespace fracsig;
using namespace fracsig::features;

namespace {

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

FeatureMatrix column_matrix(const std::vector<double>& col)
{
    FeatureMatrix m;
    m.level = 0;
    m.labels.assign(col.size(), 0);
    m.values = Matrix(static_cast<Eigen::Index>(col.size()), 1);
    for (std::size_t j = 0; j < col.size(); ++j) m.values(static_cast<Eigen::Index>(j), 0) = col[j];
    return m;
}

std::vector<LabeledDigit> to_dataset(const testing::DigitFixture& f)
{
    std::vector<LabeledDigit> out;
    for (std::size_t m = 0; m < f.images.size(); ++m) {
        LabeledDigit d;
        std::copy(f.images[m].begin(), f.images[m].end(), d.image.pixels.begin());
        d.label = f.labels[m];
        out.push_back(d);
    }
    return out;
}

}  // namespace

TEST_CASE("IDX round trip")
{
    testing::TempDir dir("fracsig_idx");
    const auto f = testing::make_digits(10, 1);
    testing::write_idx(f, dir / "img", dir / "lab");
    const auto data = load_idx(dir / "img", dir / "lab");
    REQUIRE(data.size() == 10);
    for (std::size_t m = 0; m < 10; ++m) {
        CHECK(data[m].label == f.labels[m]);
        CHECK(std::equal(f.images[m].begin(), f.images[m].end(), data[m].image.pixels.begin()));
    }
    CHECK(load_idx(dir / "img", dir / "lab", 3).size() == 3);
}

TEST_CASE("IDX format errors")
{
    testing::TempDir dir("fracsig_idx_bad");
    const auto f = testing::make_digits(4, 2);

    testing::write_idx(f, dir / "swapped", dir / "lab", __builtin_bswap32(2051u));
    try {
        load_idx(dir / "swapped", dir / "lab");
        FAIL("expected a format error");
    } catch (const FormatError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("byte 0") != std::string::npos);
        CHECK(msg.find("byte-swapped") != std::string::npos);
    }

    testing::write_idx(f, dir / "img", dir / "wrong_lab", 2051, 2051);
    CHECK_THROWS_AS(load_idx(dir / "img", dir / "wrong_lab"), FormatError);

    auto fewer = f;
    fewer.labels.pop_back();
    testing::write_idx(fewer, dir / "img2", dir / "lab2");
    try {
        load_idx(dir / "img2", dir / "lab2");
        FAIL("expected a count mismatch");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("count mismatch") != std::string::npos);
    }

    testing::write_idx(f, dir / "img3", dir / "lab3");
    std::filesystem::resize_file(dir / "img3", 16 + 784 * 2 + 100);
    try {
        load_idx(dir / "img3", dir / "lab3");
        FAIL("expected truncation");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("byte " + std::to_string(16 + 784 * 2 + 100)) != std::string::npos);
    }
    std::filesystem::resize_file(dir / "img3", 10);
    CHECK_THROWS_AS(load_idx(dir / "img3", dir / "lab3"), FormatError);
    CHECK_THROWS_AS(load_idx(dir / "missing", dir / "lab3"), FormatError);
}

TEST_CASE("digit embedding")
{
    DigitImage img;
    for (std::size_t i = 0; i < image_pixels; ++i) img.pixels[i] = static_cast<std::uint8_t>((i * 37) % 256);
    const auto p = embed_digit(img);
    CHECK(p.knot_count() == 784);
    CHECK(p.dim() == 3);
    CHECK(p.at(30, 0) == 1.0);
    CHECK(p.at(30, 1) == 2.0);
    CHECK(p.at(0, 0) == 0.0);
    CHECK(p.at(0, 1) == 0.0);
    CHECK(p.at(783, 0) == 27.0);
    CHECK(p.at(783, 1) == 27.0);
    for (std::size_t i = 0; i < image_pixels; ++i) CHECK(p.at(i, 2) == static_cast<double>(img.pixels[i]));
}

TEST_CASE("feature extraction shapes and blank digits")
{
    const auto data = to_dataset(testing::make_digits(3, 3));
    const auto f4 = extract_features(data, Alpha(1.15), 4);
    CHECK(f4.columns() == 120);
    CHECK(f4.rows() == 3);
    CHECK(feature_count(3, 7) == 3279);
    CHECK_THROWS_AS(extract_features(data, Alpha(1.15), 8), DomainError);
    CHECK_THROWS_AS(extract_features(data, Alpha(1.15), 0), DomainError);

    std::vector<LabeledDigit> blank(1);
    const auto b = extract_features(blank, Alpha(0.9), 3);
    const auto words = enumerate_words(3, 3);
    for (std::size_t j = 0; j < words.size(); ++j) {
        const bool has_pixel = std::find(words[j].channels.begin(), words[j].channels.end(), 3) != words[j].channels.end();
        if (has_pixel) {
            CHECK(b.values(0, static_cast<Eigen::Index>(j)) == 0.0);
        } else {
            CHECK(b.values(0, static_cast<Eigen::Index>(j)) != 0.0);
        }
    }
}

TEST_CASE("features are the discrete signature of the embedded digit")
{
    const auto data = to_dataset(testing::make_digits(2, 4));
    const auto f = extract_features(data, Alpha(1.0), 3);
    for (std::size_t m = 0; m < 2; ++m) {
        const auto cls = classical::signature(embed_digit(data[m].image), 3);
        TruncatedSignature got(3, 3);
        const double* src = f.values.row(static_cast<Eigen::Index>(m)).data();
        for (std::size_t k = 1; k <= 3; ++k) {
            auto dst = got.level_values(k);
            std::copy(src, src + dst.size(), dst.begin());
            src += dst.size();
        }
        CHECK(testing::level_scaled_diff(got, cls) < 1e-11);
    }
}

TEST_CASE("property: extraction is deterministic, thread-independent and permutation-equivariant")
{
    auto data = to_dataset(testing::make_digits(6, 5));
    const auto one = extract_features(data, Alpha(0.85), 3, {1, false});
    const auto many = extract_features(data, Alpha(0.85), 3, {4, false});
    CHECK(one.values == many.values);
    CHECK(one.labels == many.labels);
    std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
    std::vector<LabeledDigit> shuffled;
    for (auto i : perm) shuffled.push_back(data[i]);
    const auto s = extract_features(shuffled, Alpha(0.85), 3, {3, false});
    for (std::size_t m = 0; m < perm.size(); ++m) {
        CHECK(s.values.row(static_cast<Eigen::Index>(m)) == one.values.row(static_cast<Eigen::Index>(perm[m])));
        CHECK(s.labels[m] == one.labels[perm[m]]);
    }
}

TEST_CASE("standardize examples")
{
    const auto z = standardize(column_matrix({1, 2, 3}), column_matrix({2, 5}));
    CHECK(z.stats.mean[0] == 2.0);
    CHECK(z.stats.sd[0] == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
    CHECK(z.train.values(0, 0) == doctest::Approx(-1.224744871391589).epsilon(1e-13));
    CHECK(z.train.values(1, 0) == 0.0);
    CHECK(z.train.values(2, 0) == doctest::Approx(1.224744871391589).epsilon(1e-13));
    CHECK(z.test.values(1, 0) == doctest::Approx(3.0 / std::sqrt(2.0 / 3.0)).epsilon(1e-13));

    const auto c = standardize(column_matrix({4, 4, 4}), column_matrix({5}));
    CHECK(c.stats.sd[0] == 0.0);
    CHECK((c.train.values.array() == 0.0).all());
    CHECK(c.test.values(0, 0) == 1.0);

    FeatureMatrix wide;
    wide.values = Matrix::Zero(2, 2);
    wide.labels = {0, 1};
    CHECK_THROWS_AS(standardize(column_matrix({1, 2}), wide), DomainError);
}

TEST_CASE("property: standardized train columns have mean 0 and variance 1")
{
    testing::Gen g(51);
    FeatureMatrix m;
    m.values = Matrix(50, 7);
    m.labels.assign(50, 1);
    for (Eigen::Index r = 0; r < 50; ++r) {
        for (Eigen::Index c = 0; c < 7; ++c) m.values(r, c) = g.uniform(-1.0, 1.0) * std::pow(10.0, static_cast<double>(c)) + 3.0 * static_cast<double>(c);
    }
    const auto z = standardize(m, m);
    CHECK(z.train.values == z.test.values);
    for (Eigen::Index c = 0; c < 7; ++c) {
        const auto col = z.train.values.col(c);
        CHECK(std::fabs(col.mean()) < 1e-12);
        CHECK(std::fabs((col.array() - col.mean()).square().mean() - 1.0) < 1e-10);
    }
}

TEST_CASE("export and import round trip")
{
    testing::TempDir dir("fracsig_export");
    const auto data = to_dataset(testing::make_digits(5, 6));
    const auto z = standardize(extract_features(data, Alpha(1.15), 2), extract_features(data, Alpha(1.15), 2));
    const auto file = dir / "train.csv";
    export_features(z.train, z.stats, file);

    const std::string text = slurp(file);
    CHECK(text.rfind("label,s_1,s_2,s_3,s_1_1,s_1_2,s_1_3,s_2_1,", 0) == 0);
    CHECK(std::filesystem::exists(dir / "train.stats"));
    const std::string stats = slurp(dir / "train.stats");
    CHECK(stats.find("\nmean,") != std::string::npos);
    CHECK(stats.find("\nstd,") != std::string::npos);

    const auto back = import_features(file);
    CHECK(back.matrix.level == 2);
    CHECK(back.matrix.labels == z.train.labels);
    CHECK(back.matrix.values == z.train.values);  // shortest round-trip formatting is exact
    REQUIRE(back.stats.has_value());
    CHECK(back.stats->mean == z.stats.mean);
    CHECK(back.stats->sd == z.stats.sd);

    // Same inputs, same bytes.
    export_features(z.train, z.stats, dir / "again.csv");
    CHECK(slurp(dir / "again.csv") == text);
}

TEST_CASE("empty dataset exports a header-only file")
{
    testing::TempDir dir("fracsig_empty");
    const auto f = extract_features({}, Alpha(1.0), 1);
    const auto z = standardize(f, f);
    export_features(z.train, z.stats, dir / "empty.csv");
    CHECK(slurp(dir / "empty.csv") == "label,s_1,s_2,s_3\n");
    CHECK(import_features(dir / "empty.csv").matrix.rows() == 0);
}

TEST_CASE("import rejects malformed files")
{
    testing::TempDir dir("fracsig_import_bad");
    {
        std::ofstream(dir / "a.csv") << "label,s_1,s_3\n";
        std::ofstream(dir / "b.csv") << "label,s_1,s_2,s_3\n1,0.5,x,2\n";
        std::ofstream(dir / "c.csv") << "label,s_1,s_2,s_3\n1,0.5\n";
        std::ofstream(dir / "d.csv") << "id,s_1,s_2,s_3\n";
    }
    for (const char* name : {"a.csv", "b.csv", "c.csv", "d.csv", "nope.csv"}) {
        CHECK_THROWS_AS(import_features(dir / name), FormatError);
    }
    CHECK_THROWS_AS(export_features(FeatureMatrix{}, {}, dir / "no_such_dir" / "x.csv"), std::exception);
}
