#pragma once

// Compressed sparse row storage with a deterministic coordinate builder.

#include <algorithm>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "monofem/errors.hpp"

namespace monofem {

struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_ptr;  // size rows + 1
    std::vector<int> col_idx;
    std::vector<double> values;

    int nnz() const { return static_cast<int>(values.size()); }

    void multiply(std::span<const double> x, std::span<double> y) const {
        for (int i = 0; i < rows; ++i) {
            double acc = 0.0;
            for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += values[k] * x[col_idx[k]];
            y[i] = acc;
        }
    }

    std::vector<double> multiply(std::span<const double> x) const {
        std::vector<double> y(rows, 0.0);
        multiply(x, y);
        return y;
    }

    /// Stored value at (i,j); absent entries read as 0.
    double at(int i, int j) const {
        const int* begin = col_idx.data() + row_ptr[i];
        const int* end = col_idx.data() + row_ptr[i + 1];
        const int* it = std::lower_bound(begin, end, j);
        if (it != end && *it == j) return values[it - col_idx.data()];
        return 0.0;
    }

    double diagonal(int i) const { return at(i, i); }

    std::vector<double> row_sums() const {
        std::vector<double> s(rows, 0.0);
        for (int i = 0; i < rows; ++i)
            for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s[i] += values[k];
        return s;
    }

    /// Row-major dense copy; intended for small oracle checks.
    std::vector<double> dense() const {
        std::vector<double> d(static_cast<std::size_t>(rows) * cols, 0.0);
        for (int i = 0; i < rows; ++i)
            for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
                d[static_cast<std::size_t>(i) * cols + col_idx[k]] = values[k];
        return d;
    }
};

/// Accumulates coordinate entries independent of insertion order, so repeated
/// assembly is bit-identical. Entries that cancel to exactly zero are dropped.
class SparseBuilder {
public:
    SparseBuilder(int rows, int cols) : rows_(rows), cols_(cols) {}

    void add(int i, int j, double v) {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw ParameterError("SparseBuilder::add: index (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") out of range");
        entries_[{i, j}] += v;
    }

    SparseMatrix build() const {
        SparseMatrix m;
        m.rows = rows_;
        m.cols = cols_;
        m.row_ptr.assign(rows_ + 1, 0);
        for (const auto& [key, v] : entries_)
            if (v != 0.0) ++m.row_ptr[key.first + 1];
        for (int i = 0; i < rows_; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
        m.col_idx.reserve(m.row_ptr[rows_]);
        m.values.reserve(m.row_ptr[rows_]);
        for (const auto& [key, v] : entries_)
            if (v != 0.0) {
                m.col_idx.push_back(key.second);
                m.values.push_back(v);
            }
        return m;
    }

private:
    int rows_;
    int cols_;
    std::map<std::pair<int, int>, double> entries_;
};

}  // namespace monofem
