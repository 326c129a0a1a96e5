#pragma once

#include <vector>

#include "qclat/exact.hpp"

namespace qclat {

using FieldVec = std::vector<FieldElem>;

FieldVec operator+(const FieldVec& a, const FieldVec& b);
FieldVec operator-(const FieldVec& a, const FieldVec& b);
FieldVec operator-(const FieldVec& a);
FieldVec operator*(const FieldElem& s, const FieldVec& a);
bool operator==(const FieldVec& a, const FieldVec& b);

FieldElem inner_product(const FieldVec& a, const FieldVec& b);

/// lexicographic exact order, usable as container comparator
int compare_vec(const FieldVec& a, const FieldVec& b);

std::vector<double> to_doubles(const FieldVec& v);

/// Small dense matrix over Q(sqrt(d)), row-major. Exact throughout.
class FieldMatrix {
  public:
    FieldMatrix() : rows_(0), cols_(0) {}
    FieldMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

    static FieldMatrix identity(int n);
    /// columns stacked left to right
    static FieldMatrix from_columns(const std::vector<FieldVec>& cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    const FieldElem& at(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }
    FieldElem& at(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }

    FieldVec column(int j) const;
    FieldMatrix transpose() const;

    FieldVec apply(const FieldVec& v) const;  // M * v
    friend FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b);
    friend bool operator==(const FieldMatrix& a, const FieldMatrix& b);

    FieldElem det() const;
    FieldMatrix inverse() const;  // throws DivisionByZeroError when singular

    bool all_integer() const;

  private:
    int rows_, cols_;
    std::vector<FieldElem> data_;
};

} // namespace qclat
