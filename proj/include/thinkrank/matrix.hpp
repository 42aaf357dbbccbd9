#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace thinkrank {

/// Dense row-major matrix of doubles. Answer sets are tiny (at most a few
/// dozen labels), so everything is plain loops over contiguous storage.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c, double fill = 0.0)
        : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
    double* row(int r) { return a.data() + static_cast<std::size_t>(r) * cols; }
    const double* row(int r) const { return a.data() + static_cast<std::size_t>(r) * cols; }
    bool square() const { return rows == cols; }
    bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
};

inline Mat mat_from(std::initializer_list<std::initializer_list<double>> rows) {
    Mat m(static_cast<int>(rows.size()), rows.size() ? static_cast<int>(rows.begin()->size()) : 0);
    int r = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != m.cols) throw std::invalid_argument("ragged initializer");
        int c = 0;
        for (double v : row) m.at(r, c++) = v;
        ++r;
    }
    return m;
}

inline Mat matmul(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matmul: dimension mismatch");
    Mat out(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const double v = x.at(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < y.cols; ++j) out.at(i, j) += v * y.at(k, j);
        }
    return out;
}

inline Mat transpose(const Mat& m) {
    Mat out(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out.at(j, i) = m.at(i, j);
    return out;
}

/// W M Wᵀ for a |T|x|A| map W over a square |A|x|A| matrix.
inline Mat congruence(const Mat& w, const Mat& m) {
    if (!m.square() || w.cols != m.rows) throw std::invalid_argument("congruence: dimension mismatch");
    return matmul(matmul(w, m), transpose(w));
}

inline double frobenius_sq(const Mat& m) {
    double s = 0.0;
    for (double v : m.a) s += v * v;
    return s;
}

inline double total_sum(const Mat& m) {
    double s = 0.0;
    for (double v : m.a) s += v;
    return s;
}

inline std::vector<double> row_sums(const Mat& m) {
    std::vector<double> p(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) p[i] += m.at(i, j);
    return p;
}

/// Sum of squared entries on or above the diagonal, in fixed (i,j) order.
inline double upper_sum_sq(const Mat& m, bool include_diagonal) {
    double s = 0.0;
    for (int i = 0; i < m.rows; ++i)
        for (int j = include_diagonal ? i : i + 1; j < m.cols; ++j) s += m.at(i, j) * m.at(i, j);
    return s;
}

/// Σ_{i<j} M²_{π(i),π(j)} for a (possibly partial) order of row/col indices.
inline double strict_upper_sum_sq(const Mat& m, const std::vector<int>& order) {
    double s = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const double v = m.at(order[i], order[j]);
            s += v * v;
        }
    return s;
}

inline double strict_lower_sum_sq(const Mat& m, const std::vector<int>& order) {
    double s = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            const double v = m.at(order[i], order[j]);
            s += v * v;
        }
    return s;
}

/// Reorders rows and columns of a square matrix by the given index order.
inline Mat reorder(const Mat& m, const std::vector<int>& order) {
    if (!m.square() || static_cast<int>(order.size()) != m.rows)
        throw std::invalid_argument("reorder: dimension mismatch");
    Mat out(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out.at(i, j) = m.at(order[i], order[j]);
    return out;
}

/// Up(M): keeps entries on or above the diagonal, zeroes the rest.
inline Mat upper_part(const Mat& m) {
    Mat out(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = i; j < m.cols; ++j) out.at(i, j) = m.at(i, j);
    return out;
}

inline double max_abs_diff(const Mat& x, const Mat& y) {
    if (!x.same_shape(y)) throw std::invalid_argument("max_abs_diff: shape mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < x.a.size(); ++i) {
        const double v = x.a[i] > y.a[i] ? x.a[i] - y.a[i] : y.a[i] - x.a[i];
        if (v > d) d = v;
    }
    return d;
}

}  // namespace thinkrank
