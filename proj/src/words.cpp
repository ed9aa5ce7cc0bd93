#include "fracsig/words.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fracsig/errors.hpp"

namespace fracsig {

std::size_t ipow(std::size_t d, std::size_t k)
{
    std::size_t out = 1;
    for (std::size_t j = 0; j < k; ++j) {
        if (d != 0 && out > std::numeric_limits<std::size_t>::max() / d) {
            throw DomainError("word count overflows size_t");
        }
        out *= d;
    }
    return out;
}

std::size_t feature_count(std::size_t d, std::size_t L)
{
    std::size_t total = 0;
    for (std::size_t k = 1; k <= L; ++k) total += ipow(d, k);
    return total;
}

std::vector<Word> enumerate_words(std::size_t d, std::size_t L)
{
    if (d == 0 || L == 0) throw DomainError("enumerate_words requires d >= 1 and L >= 1");
    std::vector<Word> out;
    out.reserve(feature_count(d, L));
    for (std::size_t k = 1; k <= L; ++k) {
        const std::size_t count = ipow(d, k);
        for (std::size_t off = 0; off < count; ++off) out.push_back(word_at(d, k, off));
    }
    return out;
}

WordIndex word_index(const Word& word, std::size_t d)
{
    std::size_t offset = 0;
    for (int c : word.channels) {
        if (c < 1 || static_cast<std::size_t>(c) > d) {
            std::ostringstream os;
            os << "word channel " << c << " outside 1.." << d;
            throw DomainError(os.str());
        }
        offset = offset * d + static_cast<std::size_t>(c - 1);
    }
    return {word.length(), offset};
}

Word word_at(std::size_t d, std::size_t level, std::size_t offset)
{
    if (d == 0) throw DomainError("word_at requires d >= 1");
    if (offset >= ipow(d, level)) throw DomainError("word offset out of range for level");
    Word w;
    w.channels.resize(level);
    for (std::size_t j = level; j-- > 0;) {
        w.channels[j] = static_cast<int>(offset % d) + 1;
        offset /= d;
    }
    return w;
}

std::string word_column_name(const Word& word)
{
    std::string name = "s";
    for (int c : word.channels) {
        name += '_';
        name += std::to_string(c);
    }
    return name;
}

TruncatedSignature::TruncatedSignature(std::size_t dim, std::size_t level)
    : dim_(dim), level_(level)
{
    if (dim == 0) throw DomainError("signature dimension must be positive");
    offsets_.reserve(level + 2);
    std::size_t total = 0;
    for (std::size_t k = 0; k <= level; ++k) {
        offsets_.push_back(total);
        total += ipow(dim, k);
    }
    offsets_.push_back(total);
    data_.assign(total, 0.0);
    data_[0] = 1.0;
}

std::span<const double> TruncatedSignature::level_values(std::size_t k) const
{
    if (k > level_) throw DomainError("level beyond truncation");
    return std::span<const double>(data_).subspan(offsets_[k], offsets_[k + 1] - offsets_[k]);
}

std::span<double> TruncatedSignature::level_values(std::size_t k)
{
    if (k > level_) throw DomainError("level beyond truncation");
    return std::span<double>(data_).subspan(offsets_[k], offsets_[k + 1] - offsets_[k]);
}

double TruncatedSignature::operator[](const Word& word) const
{
    const auto idx = word_index(word, dim_);
    return level_values(idx.level)[idx.offset];
}

double& TruncatedSignature::operator[](const Word& word)
{
    const auto idx = word_index(word, dim_);
    return level_values(idx.level)[idx.offset];
}

std::span<const double> TruncatedSignature::features() const
{
    return std::span<const double>(data_).subspan(1);
}

double max_abs_diff(const TruncatedSignature& a, const TruncatedSignature& b)
{
    if (a.dim_ != b.dim_ || a.level_ != b.level_) {
        throw DomainError("max_abs_diff: signature shapes differ");
    }
    double m = 0.0;
    for (std::size_t j = 0; j < a.data_.size(); ++j) m = std::max(m, std::fabs(a.data_[j] - b.data_[j]));
    return m;
}

TruncatedSignature chen_product(const TruncatedSignature& left, const TruncatedSignature& right)
{
    if (left.dim() != right.dim() || left.level() != right.level()) {
        throw DomainError("chen_product: operands must share dimension and level");
    }
    const std::size_t d = left.dim();
    TruncatedSignature out(d, left.level());
    for (std::size_t k = 1; k <= left.level(); ++k) {
        auto dst = out.level_values(k);
        for (std::size_t r = 0; r <= k; ++r) {
            const auto lhs = left.level_values(r);
            const auto rhs = right.level_values(k - r);
            const std::size_t stride = rhs.size();
            for (std::size_t p = 0; p < lhs.size(); ++p) {
                const double a = lhs[p];
                if (a == 0.0) continue;
                double* row = dst.data() + p * stride;
                for (std::size_t q = 0; q < stride; ++q) row[q] += a * rhs[q];
            }
        }
    }
    return out;
}

}  // namespace fracsig
