#pragma once

// Row-major double matrix with the handful of operations the toy encoder
// needs. Double precision keeps the finite-difference gradient check tight
// and makes training runs bitwise reproducible.

#include <cassert>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tispell/rng.hpp"

namespace tispell {

struct Matrix {
    size_t rows = 0, cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double* row(size_t i) { return data.data() + i * cols; }
    const double* row(size_t i) const { return data.data() + i * cols; }
    double& at(size_t i, size_t j) { return data[i * cols + j]; }
    double at(size_t i, size_t j) const { return data[i * cols + j]; }

    void zero() { std::fill(data.begin(), data.end(), 0.0); }

    void fill_normal(Rng& rng, double stddev) {
        for (double& v : data) v = rng.normal() * stddev;
    }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
};

// out[i,:] += a[i,:] * b   (a: n x k, b: k x m, out: n x m)
inline void matmul_acc(const Matrix& a, const Matrix& b, Matrix& out) {
    assert(a.cols == b.rows && out.rows == a.rows && out.cols == b.cols);
    const size_t n = a.rows, k = a.cols, m = b.cols;
    for (size_t i = 0; i < n; ++i) {
        const double* arow = a.row(i);
        double* orow = out.row(i);
        for (size_t p = 0; p < k; ++p) {
            const double av = arow[p];
            if (av == 0.0) continue;
            const double* brow = b.row(p);
            for (size_t j = 0; j < m; ++j) orow[j] += av * brow[j];
        }
    }
}

// out += a^T * b   (a: n x k, b: n x m, out: k x m); the usual weight
// gradient contraction.
inline void matmul_at_b_acc(const Matrix& a, const Matrix& b, Matrix& out) {
    assert(a.rows == b.rows && out.rows == a.cols && out.cols == b.cols);
    const size_t n = a.rows, k = a.cols, m = b.cols;
    for (size_t i = 0; i < n; ++i) {
        const double* arow = a.row(i);
        const double* brow = b.row(i);
        for (size_t p = 0; p < k; ++p) {
            const double av = arow[p];
            if (av == 0.0) continue;
            double* orow = out.row(p);
            for (size_t j = 0; j < m; ++j) orow[j] += av * brow[j];
        }
    }
}

// out += a * b^T   (a: n x k, b: m x k, out: n x m); activation gradients.
inline void matmul_bt_acc(const Matrix& a, const Matrix& b, Matrix& out) {
    assert(a.cols == b.cols && out.rows == a.rows && out.cols == b.rows);
    const size_t n = a.rows, k = a.cols, m = b.rows;
    for (size_t i = 0; i < n; ++i) {
        const double* arow = a.row(i);
        double* orow = out.row(i);
        for (size_t j = 0; j < m; ++j) {
            const double* brow = b.row(j);
            double acc = 0.0;
            for (size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
            orow[j] += acc;
        }
    }
}

inline void add_row_vector(Matrix& m, const Matrix& bias) {
    assert(bias.rows == 1 && bias.cols == m.cols);
    for (size_t i = 0; i < m.rows; ++i) {
        double* row = m.row(i);
        for (size_t j = 0; j < m.cols; ++j) row[j] += bias.data[j];
    }
}

}  // namespace tispell
