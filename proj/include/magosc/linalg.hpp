#ifndef MAGOSC_LINALG_HPP
#define MAGOSC_LINALG_HPP

#include <magosc/qw.hpp>

#include <optional>
#include <vector>

namespace magosc {

using QwVector = std::vector<QwScalar>;
using QwMatrix = std::vector<QwVector>;

// exact rank by Gaussian elimination over Q(w)
inline int exact_rank(QwMatrix a) {
    if (a.empty()) return 0;
    const std::size_t rows = a.size(), cols = a[0].size();
    int rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t piv = row;
        while (piv < rows && a[piv][col].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(a[row], a[piv]);
        for (std::size_t r = row + 1; r < rows; ++r) {
            if (a[r][col].is_zero()) continue;
            QwScalar f = a[r][col] / a[row][col];
            for (std::size_t c = col; c < cols; ++c) a[r][c] -= f * a[row][c];
        }
        ++row;
        ++rank;
    }
    return rank;
}

// Solve A x = b exactly. Returns nullopt when inconsistent; free variables
// (if the system is underdetermined) are set to zero.
inline std::optional<QwVector> exact_solve(QwMatrix a, QwVector b, const Rational& rho) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    std::vector<int> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t piv = row;
        while (piv < rows && a[piv][col].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(a[row], a[piv]);
        std::swap(b[row], b[piv]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == row || a[r][col].is_zero()) continue;
            QwScalar f = a[r][col] / a[row][col];
            for (std::size_t c = col; c < cols; ++c) a[r][c] -= f * a[row][c];
            b[r] -= f * b[row];
        }
        pivot_col.push_back(static_cast<int>(col));
        ++row;
    }
    for (std::size_t r = row; r < rows; ++r)
        if (!b[r].is_zero()) return std::nullopt;
    QwVector x(cols, QwScalar::zero(rho));
    for (std::size_t r = 0; r < pivot_col.size(); ++r)
        x[pivot_col[r]] = b[r] / a[r][pivot_col[r]];
    return x;
}

}  // namespace magosc

#endif
