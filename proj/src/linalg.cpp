#include "modelset/linalg.hpp"

#include <stdexcept>

namespace modelset {

QuadraticNumber q_det(QMatrix m) {
    size_t n = m.size();
    QuadraticNumber det(1);
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && m[pivot][col].is_zero()) ++pivot;
        if (pivot == n) return QuadraticNumber(0);
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (size_t row = col + 1; row < n; ++row) {
            if (m[row][col].is_zero()) continue;
            QuadraticNumber f = m[row][col] / m[col][col];
            for (size_t j = col; j < n; ++j) m[row][j] -= f * m[col][j];
        }
    }
    return det;
}

std::optional<QMatrix> q_inverse(QMatrix m) {
    size_t n = m.size();
    QMatrix inv(n, std::vector<QuadraticNumber>(n, QuadraticNumber(0)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = QuadraticNumber(1);
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && m[pivot][col].is_zero()) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(m[pivot], m[col]);
        std::swap(inv[pivot], inv[col]);
        QuadraticNumber p = m[col][col];
        for (size_t j = 0; j < n; ++j) {
            m[col][j] = m[col][j] / p;
            inv[col][j] = inv[col][j] / p;
        }
        for (size_t row = 0; row < n; ++row) {
            if (row == col || m[row][col].is_zero()) continue;
            QuadraticNumber f = m[row][col];
            for (size_t j = 0; j < n; ++j) {
                m[row][j] -= f * m[col][j];
                inv[row][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

std::vector<QuadraticNumber> q_mat_vec(const QMatrix& m, const std::vector<QuadraticNumber>& v) {
    std::vector<QuadraticNumber> out(m.size(), QuadraticNumber(0));
    for (size_t i = 0; i < m.size(); ++i) {
        if (m[i].size() != v.size()) throw std::invalid_argument("matrix/vector size mismatch");
        for (size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
    }
    return out;
}

int rational_rank(RMatrix m) {
    if (m.empty()) return 0;
    size_t rows = m.size(), cols = m[0].size();
    int rank = 0;
    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        size_t pivot = row;
        while (pivot < rows && m[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[row]);
        for (size_t r = row + 1; r < rows; ++r) {
            if (m[r][col] == 0) continue;
            Rational f = m[r][col] / m[row][col];
            for (size_t j = col; j < cols; ++j) m[r][j] -= f * m[row][j];
        }
        ++row;
        ++rank;
    }
    return rank;
}

RationalSolveResult rational_solve(RMatrix a, std::vector<Rational> b) {
    RationalSolveResult res;
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    std::vector<size_t> pivot_col;
    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        size_t pivot = row;
        while (pivot < rows && a[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(a[pivot], a[row]);
        std::swap(b[pivot], b[row]);
        Rational p = a[row][col];
        for (size_t j = col; j < cols; ++j) a[row][j] /= p;
        b[row] /= p;
        for (size_t r = 0; r < rows; ++r) {
            if (r == row || a[r][col] == 0) continue;
            Rational f = a[r][col];
            for (size_t j = col; j < cols; ++j) a[r][j] -= f * a[row][j];
            b[r] -= f * b[row];
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (size_t r = row; r < rows; ++r)
        if (b[r] != 0) return res;  // inconsistent
    res.consistent = true;
    res.unique = pivot_col.size() == cols;
    if (res.unique) {
        res.solution.assign(cols, Rational(0));
        for (size_t i = 0; i < pivot_col.size(); ++i) res.solution[pivot_col[i]] = b[i];
    }
    return res;
}

}  // namespace modelset
