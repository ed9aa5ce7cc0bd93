#pragma once

// Synthetic IDX files and scratch directories for the feature and CLI tests.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace testing {

class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / (tag + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void put_be32(std::ofstream& out, std::uint32_t v)
{
    const unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

struct DigitFixture {
    std::vector<std::vector<std::uint8_t>> images;
    std::vector<std::uint8_t> labels;
};

// Sparse strokes on a blank background, like real digits.
inline DigitFixture make_digits(std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    DigitFixture f;
    for (std::size_t m = 0; m < count; ++m) {
        std::vector<std::uint8_t> img(784, 0);
        const std::size_t strokes = 3 + rng() % 5;
        for (std::size_t s = 0; s < strokes; ++s) {
            const std::size_t r = 4 + rng() % 20, c = 4 + rng() % 20;
            for (std::size_t j = 0; j < 6; ++j) img[r * 28 + (c + j) % 28] = static_cast<std::uint8_t>(rng() % 256);
        }
        f.images.push_back(std::move(img));
        f.labels.push_back(static_cast<std::uint8_t>(m % 10));
    }
    return f;
}

inline void write_idx(const DigitFixture& f, const std::filesystem::path& images, const std::filesystem::path& labels,
                      std::uint32_t image_magic = 2051, std::uint32_t label_magic = 2049)
{
    std::ofstream img(images, std::ios::binary);
    put_be32(img, image_magic);
    put_be32(img, static_cast<std::uint32_t>(f.images.size()));
    put_be32(img, 28);
    put_be32(img, 28);
    for (const auto& i : f.images) img.write(reinterpret_cast<const char*>(i.data()), 784);
    std::ofstream lab(labels, std::ios::binary);
    put_be32(lab, label_magic);
    put_be32(lab, static_cast<std::uint32_t>(f.labels.size()));
    lab.write(reinterpret_cast<const char*>(f.labels.data()), static_cast<std::streamsize>(f.labels.size()));
}

}  // namespace testing
