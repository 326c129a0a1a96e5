#include "qclat/linalg.hpp"

namespace qclat {

namespace {

void check_same_size(const FieldVec& a, const FieldVec& b) {
    if (a.size() != b.size()) throw Error("vector size mismatch");
}

} // namespace

FieldVec operator+(const FieldVec& a, const FieldVec& b) {
    check_same_size(a, b);
    FieldVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

FieldVec operator-(const FieldVec& a, const FieldVec& b) {
    check_same_size(a, b);
    FieldVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

FieldVec operator-(const FieldVec& a) {
    FieldVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

FieldVec operator*(const FieldElem& s, const FieldVec& a) {
    FieldVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

bool operator==(const FieldVec& a, const FieldVec& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

FieldElem inner_product(const FieldVec& a, const FieldVec& b) {
    check_same_size(a, b);
    FieldElem s;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

int compare_vec(const FieldVec& a, const FieldVec& b) {
    check_same_size(a, b);
    for (size_t i = 0; i < a.size(); ++i) {
        int c = compare(a[i], b[i]);
        if (c != 0) return c;
    }
    return 0;
}

std::vector<double> to_doubles(const FieldVec& v) {
    std::vector<double> r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = v[i].to_double();
    return r;
}

FieldMatrix FieldMatrix::identity(int n) {
    FieldMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = FieldElem::integer(1);
    return m;
}

FieldMatrix FieldMatrix::from_columns(const std::vector<FieldVec>& cols) {
    if (cols.empty()) return FieldMatrix();
    int rows = static_cast<int>(cols[0].size());
    FieldMatrix m(rows, static_cast<int>(cols.size()));
    for (int j = 0; j < m.cols(); ++j) {
        if (static_cast<int>(cols[j].size()) != rows) throw Error("ragged column list");
        for (int i = 0; i < rows; ++i) m.at(i, j) = cols[j][i];
    }
    return m;
}

FieldVec FieldMatrix::column(int j) const {
    FieldVec c(rows_);
    for (int i = 0; i < rows_; ++i) c[i] = at(i, j);
    return c;
}

FieldMatrix FieldMatrix::transpose() const {
    FieldMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

FieldVec FieldMatrix::apply(const FieldVec& v) const {
    if (static_cast<int>(v.size()) != cols_) throw Error("matrix/vector size mismatch");
    FieldVec r(rows_);
    for (int i = 0; i < rows_; ++i) {
        FieldElem s;
        for (int j = 0; j < cols_; ++j) s += at(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.cols_ != b.rows_) throw Error("matrix size mismatch");
    FieldMatrix r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
        for (int j = 0; j < b.cols_; ++j) {
            FieldElem s;
            for (int k = 0; k < a.cols_; ++k) s += a.at(i, k) * b.at(k, j);
            r.at(i, j) = s;
        }
    return r;
}

bool operator==(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    return a.data_ == b.data_;
}

FieldElem FieldMatrix::det() const {
    if (rows_ != cols_) throw Error("det of non-square matrix");
    FieldMatrix m = *this;
    int n = rows_;
    FieldElem d = FieldElem::integer(1);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int i = col; i < n; ++i)
            if (!m.at(i, col).is_zero()) {
                pivot = i;
                break;
            }
        if (pivot < 0) return FieldElem();
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(m.at(pivot, j), m.at(col, j));
            d = -d;
        }
        d = d * m.at(col, col);
        FieldElem inv = m.at(col, col).inverse();
        for (int i = col + 1; i < n; ++i) {
            FieldElem f = m.at(i, col) * inv;
            if (f.is_zero()) continue;
            for (int j = col; j < n; ++j) m.at(i, j) = m.at(i, j) - f * m.at(col, j);
        }
    }
    return d;
}

FieldMatrix FieldMatrix::inverse() const {
    if (rows_ != cols_) throw Error("inverse of non-square matrix");
    int n = rows_;
    FieldMatrix m = *this;
    FieldMatrix inv = identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int i = col; i < n; ++i)
            if (!m.at(i, col).is_zero()) {
                pivot = i;
                break;
            }
        if (pivot < 0) throw DivisionByZeroError("singular matrix");
        if (pivot != col)
            for (int j = 0; j < n; ++j) {
                std::swap(m.at(pivot, j), m.at(col, j));
                std::swap(inv.at(pivot, j), inv.at(col, j));
            }
        FieldElem p = m.at(col, col).inverse();
        for (int j = 0; j < n; ++j) {
            m.at(col, j) = m.at(col, j) * p;
            inv.at(col, j) = inv.at(col, j) * p;
        }
        for (int i = 0; i < n; ++i) {
            if (i == col || m.at(i, col).is_zero()) continue;
            FieldElem f = m.at(i, col);
            for (int j = 0; j < n; ++j) {
                m.at(i, j) = m.at(i, j) - f * m.at(col, j);
                inv.at(i, j) = inv.at(i, j) - f * inv.at(col, j);
            }
        }
    }
    return inv;
}

bool FieldMatrix::all_integer() const {
    for (const auto& e : data_)
        if (!e.is_integer()) return false;
    return true;
}

} // namespace qclat
