#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fracsig {

/// A multi-index (i₁,…,i_k) with 1-based channels in {1,…,d}.
/// The empty word is the level-0 index.
struct Word {
    std::vector<int> channels;

    std::size_t length() const { return channels.size(); }
    bool operator==(const Word&) const = default;
};

struct WordIndex {
    std::size_t level;
    std::size_t offset;
    bool operator==(const WordIndex&) const = default;
};

/// All words of length 1..L, grouped by length and lexicographic within a
/// length. Count is d + d² + … + d^L.
std::vector<Word> enumerate_words(std::size_t d, std::size_t L);

/// Level and lexicographic offset of a word: Σ_j (i_j − 1)·d^{k−j}.
WordIndex word_index(const Word& word, std::size_t d);

/// Inverse of word_index.
Word word_at(std::size_t d, std::size_t level, std::size_t offset);

/// Column name used in exported CSV files, e.g. "s_1_2".
std::string word_column_name(const Word& word);

/// d^k, with overflow checking.
std::size_t ipow(std::size_t d, std::size_t k);

/// Σ_{k=1}^{L} d^k.
std::size_t feature_count(std::size_t d, std::size_t L);

/// Dense coefficients for every word up to level L, in one contiguous block:
/// level k occupies d^k entries in lexicographic order, after all shorter
/// levels. Entry 0 (the empty word) is always 1.
class TruncatedSignature {
public:
    /// Identity element: 1 at level 0, zeros elsewhere.
    TruncatedSignature(std::size_t dim, std::size_t level);

    std::size_t dim() const { return dim_; }
    std::size_t level() const { return level_; }

    std::span<const double> level_values(std::size_t k) const;
    std::span<double> level_values(std::size_t k);

    double operator[](const Word& word) const;
    double& operator[](const Word& word);

    /// Levels 1..L flattened in canonical order (level 0 excluded).
    std::span<const double> features() const;

    /// Full storage including the leading 1.
    std::span<const double> data() const { return data_; }

    /// Max |a − b| over all coefficients; shapes must match.
    friend double max_abs_diff(const TruncatedSignature& a, const TruncatedSignature& b);

private:
    std::size_t offset_of(std::size_t k) const { return offsets_.at(k); }

    std::size_t dim_;
    std::size_t level_;
    std::vector<std::size_t> offsets_;
    std::vector<double> data_;
};

/// Truncated tensor (concatenation) product:
/// (S₁·S₂)^I = Σ_{r=0}^{k} S₁^{(i₁..i_r)} S₂^{(i_{r+1}..i_k)}.
TruncatedSignature chen_product(const TruncatedSignature& left, const TruncatedSignature& right);

}  // namespace fracsig
