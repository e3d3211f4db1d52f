#include "dtle/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace dtle {

namespace {

void check_finite(const std::vector<double>& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) throw ParameterError(std::string(what) + ": non-finite entry");
    }
}

}  // namespace

Mat::Mat(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
        throw DimensionError("Mat: entry count does not match rows*cols");
    check_finite(data_, "Mat");
}

Mat Mat::identity(std::size_t n) {
    Mat e(n, n);
    for (std::size_t i = 0; i < n; ++i) e(i, i) = 1.0;
    return e;
}

bool Mat::all_finite() const {
    for (double x : data_)
        if (!std::isfinite(x)) return false;
    return true;
}

Mat Mat::transpose() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Mat Mat::row_block(std::size_t r0, std::size_t count) const {
    if (r0 + count > rows_) throw DimensionError("row_block out of range");
    Mat b(count, cols_);
    std::copy(data_.begin() + r0 * cols_, data_.begin() + (r0 + count) * cols_,
              b.data_.begin());
    return b;
}

Mat Mat::col_block(std::size_t c0, std::size_t count) const {
    if (c0 + count > cols_) throw DimensionError("col_block out of range");
    Mat b(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < count; ++j) b(i, j) = (*this)(i, c0 + j);
    return b;
}

Mat& Mat::operator+=(const Mat& rhs) {
    if (!same_shape(rhs)) throw DimensionError("Mat+=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

Mat& Mat::operator-=(const Mat& rhs) {
    if (!same_shape(rhs)) throw DimensionError("Mat-=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

Mat& Mat::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_) throw DimensionError("Mat*: inner dimensions differ");
    Mat c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Vec::Vec(std::vector<double> entries) : data_(std::move(entries)) {
    check_finite(data_, "Vec");
}

double Vec::norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
}

double frobenius_norm(const Mat& m) {
    double s = 0.0;
    for (double x : m.data()) s += x * x;
    return std::sqrt(s);
}

double frobenius_inner(const Mat& b1, const Mat& b2) {
    if (!b1.same_shape(b2)) throw DimensionError("frobenius_inner: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < b1.data().size(); ++i) s += b1.data()[i] * b2.data()[i];
    return s;
}

Vec vec_row(const Mat& m) {
    Vec v(m.rows() * m.cols());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = m.data()[i];
    return v;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ia = 0; ia < a.rows(); ++ia)
        for (std::size_t ja = 0; ja < a.cols(); ++ja) {
            const double aij = a(ia, ja);
            if (aij == 0.0) continue;
            for (std::size_t ib = 0; ib < b.rows(); ++ib)
                for (std::size_t jb = 0; jb < b.cols(); ++jb)
                    k(ia * b.rows() + ib, ja * b.cols() + jb) = aij * b(ib, jb);
        }
    return k;
}

Vec matvec(const Mat& m, const Vec& x) {
    if (m.cols() != x.size()) throw DimensionError("matvec: shape mismatch");
    Vec y(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Vec solve_linear(const Mat& m, const Vec& b) {
    if (m.rows() != m.cols()) throw DimensionError("solve_linear: matrix not square");
    if (b.size() != m.rows()) throw DimensionError("solve_linear: rhs length mismatch");
    const std::size_t n = m.rows();
    Mat lu = m;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    double ref_pivot = 0.0;
    for (double x : m.data()) ref_pivot = std::max(ref_pivot, std::abs(x));
    const double tiny = 1e-12 * ref_pivot;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(lu(i, k)) > best) {
                best = std::abs(lu(i, k));
                p = i;
            }
        }
        if (best <= tiny)
            throw SingularMatrixError("solve_linear: numerically singular (pivot " +
                                      std::to_string(best) + " at step " + std::to_string(k) + ")");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
            std::swap(perm[k], perm[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            lu(i, k) /= lu(k, k);
            const double lik = lu(i, k);
            if (lik == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= lik * lu(k, j);
        }
    }

    Vec x(n);
    // forward substitution (unit lower)
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * x[j];
        x[i] = s;
    }
    // back substitution
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= lu(ii, j) * x[j];
        x[ii] = s / lu(ii, ii);
    }
    return x;
}

Vec sym_eigenvalues(const Mat& s) {
    if (s.rows() != s.cols()) throw DimensionError("sym_eigenvalues: matrix not square");
    const std::size_t n = s.rows();
    const double norm = frobenius_norm(s);
    {
        Mat asym = s - s.transpose();
        if (frobenius_norm(asym) > 1e-8 * (1.0 + norm))
            throw NotSymmetricError("sym_eigenvalues: input asymmetry beyond tolerance");
    }
    Mat a = s;
    {
        Mat st = s.transpose();
        for (std::size_t i = 0; i < a.data().size(); ++i)
            a.data()[i] = 0.5 * (a.data()[i] + st.data()[i]);
    }

    auto offdiag = [&]() {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) sum += a(i, j) * a(i, j);
        return std::sqrt(sum);
    };

    const double target = 1e-12 * norm;
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps && offdiag() > target; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return Vec(std::move(ev));
}

void write_matrix(std::ostream& os, const Mat& m) {
    char buf[64];
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            os << buf;
            if (j + 1 < m.cols()) os << ' ';
        }
        os << '\n';
    }
}

Mat read_matrix(std::istream& is) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::vector<double> row;
        double x;
        while (ls >> x) row.push_back(x);
        if (row.empty()) continue;
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError("read_matrix: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("read_matrix: empty input");
    const std::size_t r = rows.size(), c = rows.front().size();
    std::vector<double> flat;
    flat.reserve(r * c);
    for (auto& row : rows) flat.insert(flat.end(), row.begin(), row.end());
    return Mat(r, c, std::move(flat));
}

void write_matrix_file(const std::string& path, const Mat& m) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for write: " + path);
    write_matrix(f, m);
}

Mat read_matrix_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open for read: " + path);
    return read_matrix(f);
}

}  // namespace dtle
