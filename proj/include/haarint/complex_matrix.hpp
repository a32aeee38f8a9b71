#pragma once

#include <cstddef>
#include <vector>

#include "haarint/errors.hpp"
#include "haarint/log_complex.hpp"

namespace haarint {

// Dense row-major complex matrix. Sizes in this library stay small
// (dimension <= 64), so no blocking or expression templates.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw DimensionError("matrix dimensions must be non-negative");
    }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static ComplexMatrix scalar(int n, Complex s) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = s;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Complex& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const Complex& operator()(int i, int j) const {
        return data_[static_cast<size_t>(i) * cols_ + j];
    }

    Complex* data() { return data_.data(); }
    const Complex* data() const { return data_.data(); }

    double max_abs() const {
        double m = 0.0;
        for (const Complex& z : data_) m = std::max(m, std::abs(z));
        return m;
    }

    Complex trace() const {
        Complex t = 0.0;
        for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix a(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) a(j, i) = std::conj((*this)(i, j));
        return a;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Complex> data_;
};

// dest = a * b; dest must not alias a or b.
inline void multiply_into(ComplexMatrix& dest, const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("multiply: inner dimensions differ");
    if (dest.rows() != a.rows() || dest.cols() != b.cols())
        dest = ComplexMatrix(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < b.cols(); ++j) dest(i, j) = 0.0;
        for (int k = 0; k < a.cols(); ++k) {
            Complex aik = a(i, k);
            if (aik == Complex(0.0)) continue;
            for (int j = 0; j < b.cols(); ++j) dest(i, j) += aik * b(k, j);
        }
    }
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows(), b.cols());
    multiply_into(c, a, b);
    return c;
}

inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("add: shapes differ");
    ComplexMatrix c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("subtract: shapes differ");
    ComplexMatrix c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

inline ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
    ComplexMatrix c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
    return c;
}

}  // namespace haarint
