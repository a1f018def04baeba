#ifndef MODK0_LINALG_HPP
#define MODK0_LINALG_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace modk0 {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Dense matrix over Z with arbitrary-precision entries, row-major.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::vector<Int> row(std::size_t i) const;
    void append_row(const std::vector<Int>& r);

    IntMatrix transposed() const;
    IntMatrix operator*(const IntMatrix& rhs) const;
    bool operator==(const IntMatrix& rhs) const = default;

    bool is_zero() const;
    std::string to_string() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

/// u * input * v is diagonal with entries d; d nonnegative, d[i] | d[i+1].
struct SnfResult {
    std::vector<Int> d;
    IntMatrix u;
    IntMatrix v;
};

SnfResult snf(const IntMatrix& m);

/// Invariant factors only, no transform bookkeeping.
std::vector<Int> snf_diagonal(IntMatrix m);

std::size_t int_rank(const IntMatrix& m);

/// Determinant by fraction-free (Bareiss) elimination; m must be square.
Int det(const IntMatrix& m);

/// Row-style Hermite normal form: same shape, same integer row span,
/// pivots positive, entries above a pivot reduced into [0, pivot),
/// zero rows at the bottom.
IntMatrix hnf(const IntMatrix& m);

struct HnfTransform {
    IntMatrix h;  // hnf(m)
    IntMatrix u;  // unimodular, u * m = h
};
HnfTransform hnf_transform(const IntMatrix& m);

/// Nonzero rows of hnf(m): canonical basis of the integer row span.
IntMatrix hnf_basis(const IntMatrix& m);

/// Canonical basis of {w : w * m = 0} (rows).
IntMatrix int_row_kernel(const IntMatrix& m);

/// Coordinates w with w * basis = v, if v lies in the row lattice.
std::optional<std::vector<Int>> solve_in_lattice(const IntMatrix& basis,
                                                 const std::vector<Int>& v);
bool in_row_lattice(const IntMatrix& basis, const std::vector<Int>& v);

/// Canonical HNF basis of the intersection of two row lattices in Z^n.
IntMatrix lattice_intersect(const IntMatrix& a, const IntMatrix& b);

/// Exact inverse of a unimodular integer matrix.
IntMatrix unimodular_inverse(const IntMatrix& u);

/// Dense matrix over Q; every entry kept in lowest terms by cpp_rational.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static RatMatrix identity(std::size_t n);
    static RatMatrix from_rows(const std::vector<std::vector<Rat>>& rows);
    static RatMatrix from_int(const IntMatrix& m);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::vector<Rat> row(std::size_t i) const;
    void append_row(const std::vector<Rat>& r);

    RatMatrix transposed() const;
    RatMatrix operator*(const RatMatrix& rhs) const;
    bool operator==(const RatMatrix& rhs) const = default;

    std::string to_string() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rat> a_;
};

/// Reduced row echelon form with zero rows dropped: the canonical basis of
/// the rational row span.
RatMatrix rref(const RatMatrix& m);

std::size_t rat_rank(const RatMatrix& m);

/// Affine solution presentation for a * x = b.
struct RatSolution {
    std::vector<Rat> particular;  // free variables set to zero
    RatMatrix kernel;             // rref basis of the homogeneous solutions (rows)
};

std::optional<RatSolution> solve_rational(const RatMatrix& a, const std::vector<Rat>& b);

/// Membership of v in the rational row span of basis (basis need not be rref).
bool in_row_space(const RatMatrix& basis, const std::vector<Rat>& v);

/// Canonical basis of the intersection of two rational row spans.
RatMatrix row_space_intersect(const RatMatrix& a, const RatMatrix& b);

}  // namespace modk0

#endif
