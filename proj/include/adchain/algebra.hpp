// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "adchain/error.hpp"

namespace adchain {

/// Practical ceiling on matrix/vector dimensions (method count including the
/// dummy slot). Dense packed storage handles this comfortably; anything larger
/// is almost certainly a caller bug.
inline constexpr std::uint32_t kMaxDim = 1u << 20;

class MethodDependencyMatrix;

/// Boolean vector over an interface's method slots. Slot 0 is the reserved
/// dummy method and is false in every well-formed vector; slots 1..dim-1 are
/// the interface's real methods. Immutable after construction.
class AvailabilityVector {
public:
    /// Vector with every real method available and the dummy slot false.
    static AvailabilityVector full(std::uint32_t dim);

    /// Validating constructor; rejects dim 0 and a true dummy slot.
    static AvailabilityVector from_bits(const std::vector<bool>& bits);

    std::uint32_t dim() const { return dim_; }
    bool test(std::uint32_t i) const;

    /// Number of true slots.
    std::uint32_t count() const;

    /// True if every slot true in *this is also true in other (same dim).
    bool subset_of(const AvailabilityVector& other) const;

    bool operator==(const AvailabilityVector& other) const = default;

private:
    explicit AvailabilityVector(std::uint32_t dim);
    void set(std::uint32_t i);

    std::uint32_t dim_ = 1;
    std::vector<std::uint64_t> words_ = {0}; // tail bits beyond dim_ stay zero

    friend class MethodDependencyMatrix;
    friend AvailabilityVector apply(const MethodDependencyMatrix&, const AvailabilityVector&);
};

/// Boolean rows x cols matrix describing how an adapter implements the target
/// interface's methods from the source interface's methods: entry (j,i) is
/// true iff target method j requires source method i. Row/column slot 0 is the
/// dummy method.
///
/// Validated construction enforces the canonical row forms: row 0 is exactly
/// (t,f,...,f), and every real row is either all-false (always implementable),
/// dummy-only (never implementable), or dummy-false with at least one real
/// dependency. Composition results are exempt from the last rule: they
/// provably keep the dummy row and the availability semantics, but an OR of a
/// dummy-only row with a real-dependency row can mix both kinds of bits.
class MethodDependencyMatrix {
public:
    /// n x n matrix with a true diagonal; the identity of both apply and compose.
    static MethodDependencyMatrix identity(std::uint32_t n);

    /// Validating constructor from a rectangular bool grid.
    static MethodDependencyMatrix from_rows(const std::vector<std::vector<bool>>& rows);

    MethodDependencyMatrix() : MethodDependencyMatrix(1, 1) { set(0, 0); }

    std::uint32_t rows() const { return rows_; }
    std::uint32_t cols() const { return cols_; }
    bool test(std::uint32_t j, std::uint32_t i) const;

    bool operator==(const MethodDependencyMatrix& other) const = default;

private:
    MethodDependencyMatrix(std::uint32_t rows, std::uint32_t cols);
    void set(std::uint32_t j, std::uint32_t i);
    const std::uint64_t* row_words(std::uint32_t j) const;

    std::uint32_t rows_ = 0;
    std::uint32_t cols_ = 0;
    std::uint32_t stride_ = 0; // words per row
    std::vector<std::uint64_t> words_;

    friend AvailabilityVector apply(const MethodDependencyMatrix&, const AvailabilityVector&);
    friend MethodDependencyMatrix compose(const MethodDependencyMatrix&, const MethodDependencyMatrix&);
};

/// Availability of the target interface after adaptation:
/// result[j] = AND_i (!m[j,i] OR p[i]). Requires m.cols() == p.dim().
AvailabilityVector apply(const MethodDependencyMatrix& m, const AvailabilityVector& p);

/// Matrix of the two-adapter chain "a then b":
/// result[k,i] = OR_j (b[k,j] AND a[j,i]). Requires b.cols() == a.rows().
MethodDependencyMatrix compose(const MethodDependencyMatrix& b, const MethodDependencyMatrix& a);

/// Identity dependency matrix of dimension n.
MethodDependencyMatrix identity(std::uint32_t n);

/// The all-real-methods-available vector of dimension n.
AvailabilityVector full_availability(std::uint32_t n);

/// Count of available methods (true slots).
std::uint32_t norm(const AvailabilityVector& p);

} // namespace adchain
