#include "modk0/linalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace modk0 {

namespace {

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

// Divide rounding toward negative infinity.
Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Int>>& rows) {
    if (rows.empty()) return IntMatrix(0, 0);
    IntMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols())
            throw std::invalid_argument("IntMatrix::from_rows: ragged rows");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<Int> IntMatrix::row(std::size_t i) const {
    return std::vector<Int>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
}

void IntMatrix::append_row(const std::vector<Int>& r) {
    if (rows_ == 0 && cols_ == 0) cols_ = r.size();
    if (r.size() != cols_) throw std::invalid_argument("IntMatrix::append_row: size mismatch");
    a_.insert(a_.end(), r.begin(), r.end());
    ++rows_;
}

IntMatrix IntMatrix::transposed() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("IntMatrix::operator*: shape mismatch");
    IntMatrix p(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int& x = (*this)(i, k);
            if (x == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) p(i, j) += x * rhs(k, j);
        }
    return p;
}

bool IntMatrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Int& x) { return x == 0; });
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j);
    }
    os << "]";
    return os.str();
}

namespace {

struct SnfWork {
    IntMatrix a;
    IntMatrix u, v;
    bool track;

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(i, c), a(j, c));
        if (track)
            for (std::size_t c = 0; c < u.cols(); ++c) std::swap(u(i, c), u(j, c));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, j));
        if (track)
            for (std::size_t r = 0; r < v.rows(); ++r) std::swap(v(r, i), v(r, j));
    }
    void add_row(std::size_t dst, std::size_t src, const Int& f) {  // row dst += f * row src
        if (f == 0) return;
        for (std::size_t c = 0; c < a.cols(); ++c) a(dst, c) += f * a(src, c);
        if (track)
            for (std::size_t c = 0; c < u.cols(); ++c) u(dst, c) += f * u(src, c);
    }
    void add_col(std::size_t dst, std::size_t src, const Int& f) {  // col dst += f * col src
        if (f == 0) return;
        for (std::size_t r = 0; r < a.rows(); ++r) a(r, dst) += f * a(r, src);
        if (track)
            for (std::size_t r = 0; r < v.rows(); ++r) v(r, dst) += f * v(r, src);
    }
    void negate_row(std::size_t i) {
        for (std::size_t c = 0; c < a.cols(); ++c) a(i, c) = -a(i, c);
        if (track)
            for (std::size_t c = 0; c < u.cols(); ++c) u(i, c) = -u(i, c);
    }
};

// Diagonalize via elementary row/column reduction with minimal-|pivot| choice,
// then normalize signs and the divisibility chain.
SnfResult snf_impl(const IntMatrix& m, bool track) {
    SnfWork w{m, IntMatrix::identity(m.rows()), IntMatrix::identity(m.cols()), track};
    const std::size_t R = m.rows(), C = m.cols();
    const std::size_t k = std::min(R, C);

    for (std::size_t t = 0; t < k; ++t) {
        // Find minimal-|value| nonzero entry in the trailing submatrix.
        bool found = false;
        std::size_t pi = t, pj = t;
        Int best;
        for (std::size_t i = t; i < R; ++i)
            for (std::size_t j = t; j < C; ++j) {
                const Int& x = w.a(i, j);
                if (x == 0) continue;
                Int ax = abs_int(x);
                if (!found || ax < best) {
                    found = true;
                    best = ax;
                    pi = i;
                    pj = j;
                }
            }
        if (!found) break;
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < R; ++i) {
                if (w.a(i, t) == 0) continue;
                Int q = floor_div(w.a(i, t), w.a(t, t));
                w.add_row(i, t, -q);
                if (w.a(i, t) != 0) {
                    w.swap_rows(t, i);  // remainder is smaller: new pivot
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < C; ++j) {
                if (w.a(t, j) == 0) continue;
                Int q = floor_div(w.a(t, j), w.a(t, t));
                w.add_col(j, t, -q);
                if (w.a(t, j) != 0) {
                    w.swap_cols(t, j);
                    clean = false;
                }
            }
            if (clean) break;
        }

        // Pivot must divide the rest of the submatrix; if not, fold the
        // offending row in and redo this step.
        bool redo = false;
        for (std::size_t i = t + 1; i < R && !redo; ++i)
            for (std::size_t j = t + 1; j < C && !redo; ++j)
                if (w.a(i, j) % w.a(t, t) != 0) {
                    w.add_row(t, i, 1);
                    redo = true;
                }
        if (redo) {
            --t;
            continue;
        }
        if (w.a(t, t) < 0) w.negate_row(t);
    }

    SnfResult res;
    res.d.resize(k);
    for (std::size_t i = 0; i < k; ++i) res.d[i] = w.a(i, i);
    if (track) {
        res.u = std::move(w.u);
        res.v = std::move(w.v);
    }
    return res;
}

}  // namespace

SnfResult snf(const IntMatrix& m) { return snf_impl(m, true); }

std::vector<Int> snf_diagonal(IntMatrix m) { return snf_impl(m, false).d; }

std::size_t int_rank(const IntMatrix& m) {
    auto d = snf_diagonal(m);
    std::size_t r = 0;
    for (const Int& x : d)
        if (x != 0) ++r;
    return r;
}

Int det(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det: matrix not square");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Int prev = 1;
    int sign = 1;
    for (std::size_t t = 0; t + 1 < n; ++t) {
        if (a(t, t) == 0) {
            std::size_t p = t + 1;
            while (p < n && a(p, t) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t c = 0; c < n; ++c) std::swap(a(t, c), a(p, c));
            sign = -sign;
        }
        for (std::size_t i = t + 1; i < n; ++i)
            for (std::size_t j = t + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(t, t) - a(i, t) * a(t, j)) / prev;
        prev = a(t, t);
    }
    return sign > 0 ? a(n - 1, n - 1) : Int(-a(n - 1, n - 1));
}

namespace {

// Shared HNF elimination; u (if non-null) accumulates the row transform.
void hnf_inplace(IntMatrix& a, IntMatrix* u) {
    const std::size_t R = a.rows(), C = a.cols();
    auto add_row = [&](std::size_t dst, std::size_t src, const Int& f) {
        if (f == 0) return;
        for (std::size_t c = 0; c < C; ++c) a(dst, c) += f * a(src, c);
        if (u)
            for (std::size_t c = 0; c < u->cols(); ++c) (*u)(dst, c) += f * (*u)(src, c);
    };
    auto swap_rows = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < C; ++c) std::swap(a(i, c), a(j, c));
        if (u)
            for (std::size_t c = 0; c < u->cols(); ++c) std::swap((*u)(i, c), (*u)(j, c));
    };
    auto negate_row = [&](std::size_t i) {
        for (std::size_t c = 0; c < C; ++c) a(i, c) = -a(i, c);
        if (u)
            for (std::size_t c = 0; c < u->cols(); ++c) (*u)(i, c) = -(*u)(i, c);
    };

    std::size_t r = 0;
    for (std::size_t c = 0; c < C && r < R; ++c) {
        // Reduce all entries below row r in column c onto row r via gcd steps.
        for (;;) {
            std::size_t pivot = R;
            for (std::size_t i = r; i < R; ++i)
                if (a(i, c) != 0 && (pivot == R || abs_int(a(i, c)) < abs_int(a(pivot, c))))
                    pivot = i;
            if (pivot == R) break;
            swap_rows(r, pivot);
            bool done = true;
            for (std::size_t i = r + 1; i < R; ++i) {
                if (a(i, c) == 0) continue;
                add_row(i, r, -floor_div(a(i, c), a(r, c)));
                if (a(i, c) != 0) done = false;
            }
            if (done) break;
        }
        if (a(r, c) == 0) continue;
        if (a(r, c) < 0) negate_row(r);
        for (std::size_t i = 0; i < r; ++i) add_row(i, r, -floor_div(a(i, c), a(r, c)));
        ++r;
    }
}

}  // namespace

IntMatrix hnf(const IntMatrix& m) {
    IntMatrix a = m;
    hnf_inplace(a, nullptr);
    return a;
}

HnfTransform hnf_transform(const IntMatrix& m) {
    HnfTransform t{m, IntMatrix::identity(m.rows())};
    hnf_inplace(t.h, &t.u);
    return t;
}

IntMatrix hnf_basis(const IntMatrix& m) {
    IntMatrix h = hnf(m);
    IntMatrix b(0, m.cols());
    for (std::size_t i = 0; i < h.rows(); ++i) {
        auto r = h.row(i);
        if (std::any_of(r.begin(), r.end(), [](const Int& x) { return x != 0; }))
            b.append_row(r);
    }
    return b;
}

IntMatrix int_row_kernel(const IntMatrix& m) {
    SnfResult s = snf(m);
    IntMatrix ker(0, m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        bool zero_image = i >= s.d.size() || s.d[i] == 0;
        if (zero_image) ker.append_row(s.u.row(i));
    }
    return hnf_basis(ker);
}

std::optional<std::vector<Int>> solve_in_lattice(const IntMatrix& basis,
                                                 const std::vector<Int>& v) {
    if (basis.cols() != v.size()) throw std::invalid_argument("solve_in_lattice: size mismatch");
    HnfTransform t = hnf_transform(basis);
    std::vector<Int> residue = v;
    std::vector<Int> y(basis.rows());
    for (std::size_t i = 0; i < t.h.rows(); ++i) {
        std::size_t p = 0;
        while (p < t.h.cols() && t.h(i, p) == 0) ++p;
        if (p == t.h.cols()) break;  // zero rows at the bottom
        if (residue[p] % t.h(i, p) != 0) return std::nullopt;
        Int q = residue[p] / t.h(i, p);
        y[i] = q;
        for (std::size_t c = 0; c < t.h.cols(); ++c) residue[c] -= q * t.h(i, c);
    }
    if (std::any_of(residue.begin(), residue.end(), [](const Int& x) { return x != 0; }))
        return std::nullopt;
    // w = y * u
    std::vector<Int> w(basis.rows());
    for (std::size_t i = 0; i < basis.rows(); ++i) {
        if (y[i] == 0) continue;
        for (std::size_t j = 0; j < basis.rows(); ++j) w[j] += y[i] * t.u(i, j);
    }
    return w;
}

bool in_row_lattice(const IntMatrix& basis, const std::vector<Int>& v) {
    return solve_in_lattice(basis, v).has_value();
}

IntMatrix lattice_intersect(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("lattice_intersect: ambient mismatch");
    const std::size_t n = a.cols();
    IntMatrix s(0, n);
    for (std::size_t i = 0; i < a.rows(); ++i) s.append_row(a.row(i));
    for (std::size_t i = 0; i < b.rows(); ++i) {
        auto r = b.row(i);
        for (Int& x : r) x = -x;
        s.append_row(r);
    }
    IntMatrix ker = int_row_kernel(s);
    IntMatrix inter(0, n);
    for (std::size_t i = 0; i < ker.rows(); ++i) {
        std::vector<Int> x(n);
        for (std::size_t j = 0; j < a.rows(); ++j) {
            if (ker(i, j) == 0) continue;
            for (std::size_t c = 0; c < n; ++c) x[c] += ker(i, j) * a(j, c);
        }
        inter.append_row(x);
    }
    return hnf_basis(inter);
}

IntMatrix unimodular_inverse(const IntMatrix& u) {
    if (u.rows() != u.cols()) throw std::invalid_argument("unimodular_inverse: not square");
    const std::size_t n = u.rows();
    RatMatrix a = RatMatrix::from_int(u);
    IntMatrix inv(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<Rat> e(n);
        e[c] = 1;
        auto sol = solve_rational(a, e);
        if (!sol) throw std::invalid_argument("unimodular_inverse: singular matrix");
        for (std::size_t i = 0; i < n; ++i) {
            const Rat& q = sol->particular[i];
            if (denominator(q) != 1)
                throw std::invalid_argument("unimodular_inverse: matrix not unimodular");
            inv(i, c) = numerator(q);
        }
    }
    return inv;
}

RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<std::vector<Rat>>& rows) {
    if (rows.empty()) return RatMatrix(0, 0);
    RatMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols())
            throw std::invalid_argument("RatMatrix::from_rows: ragged rows");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

RatMatrix RatMatrix::from_int(const IntMatrix& m) {
    RatMatrix q(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) q(i, j) = Rat(m(i, j));
    return q;
}

std::vector<Rat> RatMatrix::row(std::size_t i) const {
    return std::vector<Rat>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
}

void RatMatrix::append_row(const std::vector<Rat>& r) {
    if (rows_ == 0 && cols_ == 0) cols_ = r.size();
    if (r.size() != cols_) throw std::invalid_argument("RatMatrix::append_row: size mismatch");
    a_.insert(a_.end(), r.begin(), r.end());
    ++rows_;
}

RatMatrix RatMatrix::transposed() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

RatMatrix RatMatrix::operator*(const RatMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("RatMatrix::operator*: shape mismatch");
    RatMatrix p(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rat& x = (*this)(i, k);
            if (x == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) p(i, j) += x * rhs(k, j);
        }
    return p;
}

std::string RatMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j);
    }
    os << "]";
    return os.str();
}

namespace {

// Returns pivot columns; a is reduced in place, zero rows kept.
std::vector<std::size_t> rref_inplace(RatMatrix& a) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && a(p, c) == 0) ++p;
        if (p == a.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(p, j));
        Rat inv = a(r, c);
        for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) /= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || a(i, c) == 0) continue;
            Rat f = a(i, c);
            for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

RatMatrix rref(const RatMatrix& m) {
    RatMatrix a = m;
    auto pivots = rref_inplace(a);
    RatMatrix out(0, m.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i) out.append_row(a.row(i));
    return out;
}

std::size_t rat_rank(const RatMatrix& m) {
    RatMatrix a = m;
    return rref_inplace(a).size();
}

std::optional<RatSolution> solve_rational(const RatMatrix& a, const std::vector<Rat>& b) {
    if (a.rows() != b.size()) throw std::invalid_argument("solve_rational: size mismatch");
    const std::size_t n = a.cols();
    RatMatrix aug(a.rows(), n + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n) = b[i];
    }
    auto pivots = rref_inplace(aug);
    if (!pivots.empty() && pivots.back() == n) return std::nullopt;  // 0 = 1 row

    RatSolution sol;
    sol.particular.assign(n, Rat(0));
    std::vector<bool> is_pivot(n, false);
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        is_pivot[pivots[i]] = true;
        sol.particular[pivots[i]] = aug(i, n);
    }
    RatMatrix ker(0, n);
    for (std::size_t c = 0; c < n; ++c) {
        if (is_pivot[c]) continue;
        std::vector<Rat> k(n);
        k[c] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) k[pivots[i]] = -aug(i, c);
        ker.append_row(k);
    }
    sol.kernel = rref(ker);
    return sol;
}

bool in_row_space(const RatMatrix& basis, const std::vector<Rat>& v) {
    RatMatrix a = basis;
    auto r0 = rref_inplace(a).size();
    RatMatrix b = basis;
    b.append_row(v);
    return rat_rank(b) == r0;
}

RatMatrix row_space_intersect(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("row_space_intersect: ambient mismatch");
    const std::size_t n = a.cols();
    // (u, w) with u*a - w*b = 0; intersection vectors are u*a.
    RatMatrix s(0, n);
    for (std::size_t i = 0; i < a.rows(); ++i) s.append_row(a.row(i));
    for (std::size_t i = 0; i < b.rows(); ++i) {
        auto r = b.row(i);
        for (Rat& x : r) x = -x;
        s.append_row(r);
    }
    auto sol = solve_rational(s.transposed(), std::vector<Rat>(n, Rat(0)));
    RatMatrix inter(0, n);
    if (sol) {
        for (std::size_t i = 0; i < sol->kernel.rows(); ++i) {
            std::vector<Rat> x(n);
            for (std::size_t j = 0; j < a.rows(); ++j) {
                const Rat& f = sol->kernel(i, j);
                if (f == 0) continue;
                for (std::size_t c = 0; c < n; ++c) x[c] += f * a(j, c);
            }
            inter.append_row(x);
        }
    }
    return rref(inter);
}

}  // namespace modk0
