#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "dtle/errors.hpp"

namespace dtle {

/// Dense real matrix, row-major storage. Small and dumb on purpose: the
/// problems here are desk scale (n up to a few hundred).
class Mat {
public:
    Mat() = default;

    // Zero-filled.
    Mat(std::size_t rows, std::size_t cols);

    // From explicit entries (row-major). Rejects NaN/Inf and size mismatch.
    Mat(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static Mat identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool same_shape(const Mat& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    bool all_finite() const;

    Mat transpose() const;

    // Row block [r0, r0+count) as a count x cols matrix.
    Mat row_block(std::size_t r0, std::size_t count) const;
    // Column block [c0, c0+count) as a rows x count matrix.
    Mat col_block(std::size_t c0, std::size_t count) const;

    Mat& operator+=(const Mat& rhs);
    Mat& operator-=(const Mat& rhs);
    Mat& operator*=(double s);

    friend Mat operator+(Mat lhs, const Mat& rhs) { return lhs += rhs; }
    friend Mat operator-(Mat lhs, const Mat& rhs) { return lhs -= rhs; }
    friend Mat operator*(Mat lhs, double s) { return lhs *= s; }
    friend Mat operator*(double s, Mat rhs) { return rhs *= s; }
    friend Mat operator*(const Mat& a, const Mat& b);  // matrix product

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

class Vec {
public:
    Vec() = default;
    explicit Vec(std::size_t len) : data_(len, 0.0) {}
    explicit Vec(std::vector<double> entries);  // rejects NaN/Inf

    std::size_t size() const { return data_.size(); }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    const std::vector<double>& data() const { return data_; }

    double norm() const;

private:
    std::vector<double> data_;
};

// ||M||_F = sqrt(sum of squared entries).
double frobenius_norm(const Mat& m);

// <B1, B2>_F = sum of elementwise products. Throws DimensionError on shape mismatch.
double frobenius_inner(const Mat& b1, const Mat& b2);

// Row-major vectorization: row 1's entries, then row 2's, and so on.
Vec vec_row(const Mat& m);

// Kronecker product: block (i,j) is a_ij * B. Satisfies
// vec_row(A*M*C) = kron(A, C') * vec_row(M).
Mat kron(const Mat& a, const Mat& b);

Vec matvec(const Mat& m, const Vec& x);

// Dense LU with partial pivoting. Throws SingularMatrixError when a pivot
// falls below 1e-12 times the largest initial pivot.
Vec solve_linear(const Mat& m, const Vec& b);

// All eigenvalues of a symmetric matrix, nondecreasing, via cyclic Jacobi
// rotations (off-diagonal norm driven to 1e-12 * ||S||_F). Input is
// symmetrized as (S+S')/2 first; asymmetry beyond 1e-8*(1+||S||_F) throws
// NotSymmetricError.
Vec sym_eigenvalues(const Mat& s);

// Text format: one matrix row per line, whitespace-separated, 17 significant
// digits (round-trippable).
void write_matrix(std::ostream& os, const Mat& m);
Mat read_matrix(std::istream& is);
void write_matrix_file(const std::string& path, const Mat& m);
Mat read_matrix_file(const std::string& path);

}  // namespace dtle
