// SPDX-License-Identifier: Apache-2.0
#include "adchain/algebra.hpp"

#include <string>

namespace adchain {

namespace {

std::uint32_t words_for(std::uint32_t bits) {
    return (bits + 63u) / 64u;
}

void check_dim(std::uint32_t dim, const char* what) {
    if (dim == 0)
        throw InvalidInput(std::string(what) + ": dimension must be at least 1");
    if (dim > kMaxDim)
        throw InvalidInput(std::string(what) + ": dimension " + std::to_string(dim) +
                           " exceeds the supported ceiling " + std::to_string(kMaxDim));
}

} // namespace

AvailabilityVector::AvailabilityVector(std::uint32_t dim)
    : dim_(dim), words_(words_for(dim), 0) {}

void AvailabilityVector::set(std::uint32_t i) {
    words_[i >> 6] |= std::uint64_t(1) << (i & 63);
}

bool AvailabilityVector::test(std::uint32_t i) const {
    if (i >= dim_)
        throw InvalidInput("availability vector: slot " + std::to_string(i) +
                           " out of range for dim " + std::to_string(dim_));
    return (words_[i >> 6] >> (i & 63)) & 1u;
}

std::uint32_t AvailabilityVector::count() const {
    std::uint32_t n = 0;
    for (std::uint64_t w : words_)
        n += static_cast<std::uint32_t>(__builtin_popcountll(w));
    return n;
}

bool AvailabilityVector::subset_of(const AvailabilityVector& other) const {
    if (dim_ != other.dim_)
        throw InvalidInput("availability vectors have different dims: " + std::to_string(dim_) +
                           " vs " + std::to_string(other.dim_));
    for (std::size_t w = 0; w < words_.size(); ++w)
        if (words_[w] & ~other.words_[w])
            return false;
    return true;
}

AvailabilityVector AvailabilityVector::full(std::uint32_t dim) {
    check_dim(dim, "full_availability");
    AvailabilityVector v(dim);
    for (std::uint32_t i = 1; i < dim; ++i)
        v.set(i);
    return v;
}

AvailabilityVector AvailabilityVector::from_bits(const std::vector<bool>& bits) {
    check_dim(static_cast<std::uint32_t>(bits.size()), "availability vector");
    if (bits[0])
        throw InvalidInput("availability vector: dummy slot 0 must be false");
    AvailabilityVector v(static_cast<std::uint32_t>(bits.size()));
    for (std::uint32_t i = 0; i < v.dim_; ++i)
        if (bits[i])
            v.set(i);
    return v;
}

MethodDependencyMatrix::MethodDependencyMatrix(std::uint32_t rows, std::uint32_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)),
      words_(static_cast<std::size_t>(rows) * stride_, 0) {}

void MethodDependencyMatrix::set(std::uint32_t j, std::uint32_t i) {
    words_[static_cast<std::size_t>(j) * stride_ + (i >> 6)] |= std::uint64_t(1) << (i & 63);
}

bool MethodDependencyMatrix::test(std::uint32_t j, std::uint32_t i) const {
    if (j >= rows_ || i >= cols_)
        throw InvalidInput("dependency matrix: entry (" + std::to_string(j) + "," +
                           std::to_string(i) + ") out of range for " + std::to_string(rows_) +
                           "x" + std::to_string(cols_));
    return (words_[static_cast<std::size_t>(j) * stride_ + (i >> 6)] >> (i & 63)) & 1u;
}

const std::uint64_t* MethodDependencyMatrix::row_words(std::uint32_t j) const {
    return words_.data() + static_cast<std::size_t>(j) * stride_;
}

MethodDependencyMatrix MethodDependencyMatrix::identity(std::uint32_t n) {
    check_dim(n, "identity");
    MethodDependencyMatrix m(n, n);
    for (std::uint32_t j = 0; j < n; ++j)
        m.set(j, j);
    return m;
}

MethodDependencyMatrix MethodDependencyMatrix::from_rows(const std::vector<std::vector<bool>>& rows) {
    check_dim(static_cast<std::uint32_t>(rows.size()), "dependency matrix rows");
    check_dim(static_cast<std::uint32_t>(rows[0].size()), "dependency matrix cols");
    const auto n_rows = static_cast<std::uint32_t>(rows.size());
    const auto n_cols = static_cast<std::uint32_t>(rows[0].size());
    MethodDependencyMatrix m(n_rows, n_cols);
    for (std::uint32_t j = 0; j < n_rows; ++j) {
        const auto& row = rows[j];
        if (row.size() != n_cols)
            throw InvalidInput("dependency matrix: row " + std::to_string(j) + " has " +
                               std::to_string(row.size()) + " entries, expected " +
                               std::to_string(n_cols));
        bool dummy_dep = row[0];
        std::uint32_t real_deps = 0;
        for (std::uint32_t i = 0; i < n_cols; ++i) {
            if (row[i])
                m.set(j, i);
            if (i > 0 && row[i])
                ++real_deps;
        }
        if (j == 0) {
            if (!dummy_dep || real_deps != 0)
                throw InvalidInput("dependency matrix: row 0 must depend on exactly the dummy method");
        } else if (dummy_dep && real_deps != 0) {
            throw InvalidInput("dependency matrix: row " + std::to_string(j) +
                               " mixes the dummy dependency with real dependencies");
        }
    }
    return m;
}

AvailabilityVector apply(const MethodDependencyMatrix& m, const AvailabilityVector& p) {
    if (m.cols() != p.dim())
        throw InvalidInput("apply: matrix has " + std::to_string(m.cols()) +
                           " columns but vector has dim " + std::to_string(p.dim()));
    AvailabilityVector q(m.rows());
    // q[j] is true iff no required source method is unavailable. Row tail
    // bits are zero, so the word loop needs no masking.
    for (std::uint32_t j = 0; j < m.rows(); ++j) {
        const std::uint64_t* row = m.row_words(j);
        bool ok = true;
        for (std::uint32_t w = 0; w < m.stride_; ++w) {
            if (row[w] & ~p.words_[w]) {
                ok = false;
                break;
            }
        }
        if (ok)
            q.set(j);
    }
    return q;
}

MethodDependencyMatrix compose(const MethodDependencyMatrix& b, const MethodDependencyMatrix& a) {
    if (b.cols() != a.rows())
        throw InvalidInput("compose: left matrix has " + std::to_string(b.cols()) +
                           " columns but right matrix has " + std::to_string(a.rows()) + " rows");
    MethodDependencyMatrix r(b.rows(), a.cols());
    for (std::uint32_t k = 0; k < b.rows(); ++k) {
        const std::uint64_t* brow = b.row_words(k);
        std::uint64_t* rrow = r.words_.data() + static_cast<std::size_t>(k) * r.stride_;
        for (std::uint32_t w = 0; w < b.stride_; ++w) {
            std::uint64_t bits = brow[w];
            while (bits) {
                const std::uint32_t j = (w << 6) + static_cast<std::uint32_t>(__builtin_ctzll(bits));
                bits &= bits - 1;
                const std::uint64_t* arow = a.row_words(j);
                for (std::uint32_t v = 0; v < a.stride_; ++v)
                    rrow[v] |= arow[v];
            }
        }
    }
    return r;
}

MethodDependencyMatrix identity(std::uint32_t n) {
    return MethodDependencyMatrix::identity(n);
}

AvailabilityVector full_availability(std::uint32_t n) {
    return AvailabilityVector::full(n);
}

std::uint32_t norm(const AvailabilityVector& p) {
    return p.count();
}

} // namespace adchain
