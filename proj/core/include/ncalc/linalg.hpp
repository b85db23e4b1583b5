#pragma once

#include "ncalc/rational.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace ncalc {

/// Dense matrix over the exact rationals. Row-major, no implicit rounding
/// anywhere; rank and solvability decisions are exact.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    static RationalMatrix identity(std::size_t n) {
        RationalMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Rational(1);
        return m;
    }

    /// In-place Gauss-Jordan reduction. Returns the pivot columns; the
    /// matrix afterwards is in reduced row echelon form.
    std::vector<std::size_t> reduce() {
        std::vector<std::size_t> pivots;
        std::size_t row = 0;
        for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
            std::size_t sel = row;
            while (sel < rows_ && at(sel, col).is_zero()) ++sel;
            if (sel == rows_) continue;
            if (sel != row) swap_rows(sel, row);
            Rational inv = Rational(1) / at(row, col);
            for (std::size_t c = col; c < cols_; ++c) at(row, c) *= inv;
            for (std::size_t r = 0; r < rows_; ++r) {
                if (r == row || at(r, col).is_zero()) continue;
                Rational f = at(r, col);
                for (std::size_t c = col; c < cols_; ++c) at(r, c) -= f * at(row, c);
            }
            pivots.push_back(col);
            ++row;
        }
        return pivots;
    }

    std::size_t rank() const {
        RationalMatrix copy = *this;
        return copy.reduce().size();
    }

private:
    void swap_rows(std::size_t a, std::size_t b) {
        for (std::size_t c = 0; c < cols_; ++c) std::swap(at(a, c), at(b, c));
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

/// Particular solution of A x = b with free variables set to zero, or
/// nullopt when the system is inconsistent.
inline std::optional<std::vector<Rational>> solve_exact(const RationalMatrix& a,
                                                        const std::vector<Rational>& b) {
    RationalMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
        aug.at(r, a.cols()) = b[r];
    }
    std::vector<std::size_t> pivots = aug.reduce();
    // A pivot in the augmented column means 0 = 1 somewhere.
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
    std::vector<Rational> x(a.cols(), Rational(0));
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug.at(i, a.cols());
    return x;
}

/// Solve A x = b in doubles with partial pivoting. Returns nullopt when a
/// pivot falls below `tol`.
inline std::optional<std::vector<double>> solve_double(std::vector<std::vector<double>> a,
                                                       std::vector<double> b,
                                                       double tol = 1e-12) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t sel = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[sel][col])) sel = r;
        if (std::fabs(a[sel][col]) < tol) return std::nullopt;
        std::swap(a[sel], a[col]);
        std::swap(b[sel], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

} // namespace ncalc
