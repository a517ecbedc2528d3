#include "polyhom/algebra.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

namespace polyhom {

namespace {

Integer abs_value(const Integer& x) { return x < 0 ? Integer(-x) : x; }

std::int64_t to_int64(const Integer& x) {
    if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min()) {
        throw std::overflow_error("integer does not fit in 64 bits: " + x.str());
    }
    return static_cast<std::int64_t>(x);
}

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace

// ---------------------------------------------------------------- IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
        for (long long v : r) data_.emplace_back(v);
    }
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::diagonal(const std::vector<Integer>& diag) {
    IntMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw std::invalid_argument("row length mismatch");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

bool IntMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
}

std::vector<Integer> IntMatrix::column(std::size_t c) const {
    std::vector<Integer> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

std::vector<Integer> IntMatrix::row(std::size_t r) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product dimension mismatch");
    IntMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Integer& x = a(i, k);
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += x * b(k, j);
        }
    return out;
}

std::vector<Integer> operator*(const IntMatrix& a, const std::vector<Integer>& x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matrix-vector dimension mismatch");
    std::vector<Integer> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) out[i] += a(i, k) * x[k];
    return out;
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t r = 0; r < rows_; ++r) {
        os << (r ? "; " : "");
        for (std::size_t c = 0; c < cols_; ++c) os << (c ? " " : "") << (*this)(r, c);
    }
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------- Smith form

std::vector<Integer> SmithForm::diagonal() const {
    std::vector<Integer> d;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
    return d;
}

namespace {

// Elementary operations applied to D while keeping D = U A V and the inverses in sync.
class SmithReducer {
  public:
    explicit SmithReducer(const IntMatrix& A)
        : m_(A.rows()), n_(A.cols()) {
        f_.D = A;
        f_.U = f_.U_inv = IntMatrix::identity(m_);
        f_.V = f_.V_inv = IntMatrix::identity(n_);
    }

    SmithForm run() {
        std::size_t t = 0;
        for (; t < std::min(m_, n_); ++t) {
            if (!move_global_min(t)) break;
            reduce_pivot(t);
            if (f_.D(t, t) < 0) negate_row(t);
        }
        f_.rank = 0;
        for (std::size_t i = 0; i < std::min(m_, n_); ++i)
            if (f_.D(i, i) != 0) ++f_.rank;
        return std::move(f_);
    }

  private:
    Integer& d(std::size_t r, std::size_t c) { return f_.D(r, c); }

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < n_; ++c) std::swap(d(i, c), d(j, c));
        for (std::size_t c = 0; c < m_; ++c) std::swap(f_.U(i, c), f_.U(j, c));
        for (std::size_t r = 0; r < m_; ++r) std::swap(f_.U_inv(r, i), f_.U_inv(r, j));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < m_; ++r) std::swap(d(r, i), d(r, j));
        for (std::size_t r = 0; r < n_; ++r) std::swap(f_.V(r, i), f_.V(r, j));
        for (std::size_t c = 0; c < n_; ++c) std::swap(f_.V_inv(i, c), f_.V_inv(j, c));
    }
    // row_i += q * row_t
    void add_row(std::size_t i, std::size_t t, const Integer& q) {
        for (std::size_t c = 0; c < n_; ++c) d(i, c) += q * d(t, c);
        for (std::size_t c = 0; c < m_; ++c) f_.U(i, c) += q * f_.U(t, c);
        for (std::size_t r = 0; r < m_; ++r) f_.U_inv(r, t) -= q * f_.U_inv(r, i);
    }
    // col_j += q * col_t
    void add_col(std::size_t j, std::size_t t, const Integer& q) {
        for (std::size_t r = 0; r < m_; ++r) d(r, j) += q * d(r, t);
        for (std::size_t r = 0; r < n_; ++r) f_.V(r, j) += q * f_.V(r, t);
        for (std::size_t c = 0; c < n_; ++c) f_.V_inv(t, c) -= q * f_.V_inv(j, c);
    }
    void negate_row(std::size_t i) {
        for (std::size_t c = 0; c < n_; ++c) d(i, c) = -d(i, c);
        for (std::size_t c = 0; c < m_; ++c) f_.U(i, c) = -f_.U(i, c);
        for (std::size_t r = 0; r < m_; ++r) f_.U_inv(r, i) = -f_.U_inv(r, i);
    }

    bool move_global_min(std::size_t t) {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        Integer best_abs;
        for (std::size_t r = t; r < m_; ++r)
            for (std::size_t c = t; c < n_; ++c) {
                if (d(r, c) == 0) continue;
                Integer a = abs_value(d(r, c));
                if (!best || a < best_abs) {
                    best = {r, c};
                    best_abs = a;
                }
            }
        if (!best) return false;
        swap_rows(t, best->first);
        swap_cols(t, best->second);
        return true;
    }

    // Smallest nonzero entry of row t / column t moved onto the pivot.
    void move_line_min(std::size_t t) {
        std::size_t br = t, bc = t;
        Integer best_abs = abs_value(d(t, t));
        for (std::size_t r = t + 1; r < m_; ++r)
            if (d(r, t) != 0 && (best_abs == 0 || abs_value(d(r, t)) < best_abs)) {
                best_abs = abs_value(d(r, t));
                br = r;
                bc = t;
            }
        for (std::size_t c = t + 1; c < n_; ++c)
            if (d(t, c) != 0 && (best_abs == 0 || abs_value(d(t, c)) < best_abs)) {
                best_abs = abs_value(d(t, c));
                br = t;
                bc = c;
            }
        swap_rows(t, br);
        swap_cols(t, bc);
    }

    void reduce_pivot(std::size_t t) {
        for (;;) {
            bool dirty = false;
            for (std::size_t r = t + 1; r < m_; ++r) {
                if (d(r, t) == 0) continue;
                Integer q = d(r, t) / d(t, t);
                if (q != 0) add_row(r, t, -q);
                if (d(r, t) != 0) dirty = true;
            }
            for (std::size_t c = t + 1; c < n_; ++c) {
                if (d(t, c) == 0) continue;
                Integer q = d(t, c) / d(t, t);
                if (q != 0) add_col(c, t, -q);
                if (d(t, c) != 0) dirty = true;
            }
            if (dirty) {
                move_line_min(t);
                continue;
            }
            bool fixed = false;
            for (std::size_t r = t + 1; r < m_ && !fixed; ++r)
                for (std::size_t c = t + 1; c < n_; ++c)
                    if (d(r, c) % d(t, t) != 0) {
                        add_row(t, r, 1);
                        fixed = true;
                        break;
                    }
            if (!fixed) return;
        }
    }

    std::size_t m_, n_;
    SmithForm f_;
};

}  // namespace

SmithForm snf(const IntMatrix& A) { return SmithReducer(A).run(); }

Integer determinant(const IntMatrix& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("determinant of a non-square matrix");
    const std::size_t n = A.rows();
    if (n == 0) return 1;
    // Bareiss fraction-free elimination.
    IntMatrix M = A;
    Integer sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (M(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && M(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t c = 0; c < n; ++c) std::swap(M(k, c), M(p, c));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) M(i, j) = (M(i, j) * M(k, k) - M(i, k) * M(k, j)) / prev;
        prev = M(k, k);
    }
    return sign * M(n - 1, n - 1);
}

std::size_t rank(const IntMatrix& A) { return snf(A).rank; }

IntMatrix kernel_basis(const IntMatrix& A) {
    SmithForm f = snf(A);
    IntMatrix K(A.cols(), A.cols() - f.rank);
    for (std::size_t c = f.rank; c < A.cols(); ++c)
        for (std::size_t r = 0; r < A.cols(); ++r) K(r, c - f.rank) = f.V(r, c);
    return K;
}

IntMatrix column_basis(const IntMatrix& A) {
    SmithForm f = snf(A);
    IntMatrix B(A.rows(), f.rank);
    for (std::size_t c = 0; c < f.rank; ++c)
        for (std::size_t r = 0; r < A.rows(); ++r) B(r, c) = f.U_inv(r, c) * f.D(c, c);
    return B;
}

std::optional<std::vector<Integer>> image_solve(const IntMatrix& A, const std::vector<Integer>& b) {
    if (b.size() != A.rows()) throw std::invalid_argument("image_solve: right-hand side has wrong length");
    SmithForm f = snf(A);
    std::vector<Integer> c = f.U * b;
    std::vector<Integer> y(A.cols());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        if (i < f.rank) {
            if (c[i] % f.D(i, i) != 0) return std::nullopt;
            y[i] = c[i] / f.D(i, i);
        } else if (c[i] != 0) {
            return std::nullopt;
        }
    }
    return f.V * y;
}

// ---------------------------------------------------------------- groups

bool GroupElement::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](std::int64_t c) { return c == 0; });
}

std::string GroupElement::key() const {
    std::string s;
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(coords_[i]);
    }
    return s;
}

FinAbelianGroup::FinAbelianGroup(std::vector<std::int64_t> invariant_factors, std::size_t free_rank)
    : factors_(std::move(invariant_factors)), free_rank_(free_rank) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i] < 2) throw std::invalid_argument("invariant factor below 2");
        if (i > 0 && factors_[i] % factors_[i - 1] != 0)
            throw std::invalid_argument("invariant factors do not form a divisibility chain");
    }
}

FinAbelianGroup FinAbelianGroup::from_orders(const std::vector<std::int64_t>& orders) {
    std::vector<Integer> diag;
    for (std::int64_t o : orders) {
        if (o < 1) throw std::invalid_argument("cyclic order must be positive");
        diag.emplace_back(o);
    }
    return quotient_group(IntMatrix::diagonal(diag));
}

FinAbelianGroup FinAbelianGroup::cyclic(std::int64_t order) { return from_orders({order}); }

std::size_t FinAbelianGroup::order() const {
    if (!is_finite()) throw std::logic_error("order of an infinite group");
    std::size_t n = 1;
    for (std::int64_t d : factors_) n *= static_cast<std::size_t>(d);
    return n;
}

GroupElement FinAbelianGroup::zero() const { return GroupElement(std::vector<std::int64_t>(rank(), 0)); }

GroupElement FinAbelianGroup::reduce(std::vector<std::int64_t> coords) const {
    if (coords.size() != rank()) throw std::invalid_argument("coordinate count does not match group rank");
    for (std::size_t i = 0; i < factors_.size(); ++i) coords[i] = mod_floor(coords[i], factors_[i]);
    return GroupElement(std::move(coords));
}

bool FinAbelianGroup::contains(const GroupElement& a) const {
    if (a.size() != rank()) return false;
    for (std::size_t i = 0; i < factors_.size(); ++i)
        if (a[i] < 0 || a[i] >= factors_[i]) return false;
    return true;
}

GroupElement FinAbelianGroup::add(const GroupElement& a, const GroupElement& b) const {
    std::vector<std::int64_t> c(rank());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
    return reduce(std::move(c));
}

GroupElement FinAbelianGroup::negate(const GroupElement& a) const {
    std::vector<std::int64_t> c(rank());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = -a[i];
    return reduce(std::move(c));
}

GroupElement FinAbelianGroup::sub(const GroupElement& a, const GroupElement& b) const { return add(a, negate(b)); }

GroupElement FinAbelianGroup::scale(const GroupElement& a, std::int64_t k) const {
    std::vector<std::int64_t> c(rank());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] * k;
    return reduce(std::move(c));
}

std::size_t FinAbelianGroup::index_of(const GroupElement& a) const {
    if (!is_finite() || !contains(a)) throw std::invalid_argument("element not in group");
    std::size_t idx = 0, radix = 1;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        idx += static_cast<std::size_t>(a[i]) * radix;
        radix *= static_cast<std::size_t>(factors_[i]);
    }
    return idx;
}

GroupElement FinAbelianGroup::element(std::size_t index) const {
    if (index >= order()) throw std::out_of_range("group element index");
    std::vector<std::int64_t> c(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        c[i] = static_cast<std::int64_t>(index % static_cast<std::size_t>(factors_[i]));
        index /= static_cast<std::size_t>(factors_[i]);
    }
    return GroupElement(std::move(c));
}

std::vector<GroupElement> FinAbelianGroup::elements() const {
    std::vector<GroupElement> out;
    const std::size_t n = order();
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(element(i));
    return out;
}

std::string FinAbelianGroup::to_string() const {
    if (is_trivial()) return "0";
    std::string s;
    if (free_rank_ > 0) s = free_rank_ == 1 ? "Z" : "Z^" + std::to_string(free_rank_);
    for (std::int64_t d : factors_) s += (s.empty() ? "" : " + ") + std::string("Z/") + std::to_string(d);
    return s;
}

bool iso_check(const FinAbelianGroup& a, const FinAbelianGroup& b) {
    return a.invariant_factors() == b.invariant_factors() && a.free_rank() == b.free_rank();
}

// ---------------------------------------------------------------- homs

GroupHom::GroupHom(FinAbelianGroup source, FinAbelianGroup target, std::vector<std::vector<std::int64_t>> matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (matrix_.size() != target_.rank()) throw std::invalid_argument("hom matrix needs one row per target generator");
    for (const auto& row : matrix_)
        if (row.size() != source_.rank()) throw std::invalid_argument("hom matrix needs one column per source generator");
}

GroupHom GroupHom::identity(const FinAbelianGroup& g) {
    std::vector<std::vector<std::int64_t>> m(g.rank(), std::vector<std::int64_t>(g.rank(), 0));
    for (std::size_t i = 0; i < g.rank(); ++i) m[i][i] = 1;
    return {g, g, std::move(m)};
}

GroupElement GroupHom::apply(const GroupElement& x) const {
    if (x.size() != source_.rank()) throw std::invalid_argument("element not in hom source");
    std::vector<std::int64_t> y(target_.rank(), 0);
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += matrix_[i][j] * x[j];
    return target_.reduce(std::move(y));
}

bool GroupHom::respects_orders() const {
    const auto& src = source_.invariant_factors();
    for (std::size_t j = 0; j < src.size(); ++j) {
        std::vector<std::int64_t> col(target_.rank());
        for (std::size_t i = 0; i < col.size(); ++i) col[i] = matrix_[i][j] * src[j];
        if (!target_.reduce(std::move(col)).is_zero()) return false;
    }
    return true;
}

bool GroupHom::is_surjective() const {
    const std::size_t r = target_.rank();
    std::vector<std::vector<Integer>> rows;
    for (std::size_t i = 0; i < target_.invariant_factors().size(); ++i) {
        std::vector<Integer> row(r);
        row[i] = target_.invariant_factors()[i];
        rows.push_back(std::move(row));
    }
    for (std::size_t j = 0; j < source_.rank(); ++j) {
        std::vector<Integer> row(r);
        for (std::size_t i = 0; i < r; ++i) row[i] = matrix_[i][j];
        rows.push_back(std::move(row));
    }
    return quotient_group(IntMatrix::from_rows(rows, r)).is_trivial();
}

GroupHom GroupHom::compose(const GroupHom& inner) const {
    if (!(inner.target_ == source_)) throw std::invalid_argument("composing homs with mismatched groups");
    std::vector<std::vector<std::int64_t>> m(target_.rank(), std::vector<std::int64_t>(inner.source_.rank(), 0));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j)
            for (std::size_t k = 0; k < source_.rank(); ++k) m[i][j] += matrix_[i][k] * inner.matrix_[k][j];
    return GroupHom(inner.source_, target_, std::move(m)).canonical();
}

GroupHom GroupHom::canonical() const {
    auto m = matrix_;
    const auto& f = target_.invariant_factors();
    for (std::size_t i = 0; i < f.size(); ++i)
        for (auto& x : m[i]) x = mod_floor(x, f[i]);
    return {source_, target_, std::move(m)};
}

bool operator==(const GroupHom& a, const GroupHom& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.canonical().matrix_ == b.canonical().matrix_;
}

// ---------------------------------------------------------------- presentations

GroupElement Presentation::coordinates(const std::vector<Integer>& coefficients) const {
    if (coefficients.size() != to_coords.rows()) throw std::invalid_argument("coefficient vector has wrong length");
    std::vector<std::int64_t> y(to_coords.cols());
    for (std::size_t t = 0; t < y.size(); ++t) {
        Integer acc = 0;
        for (std::size_t k = 0; k < coefficients.size(); ++k) acc += coefficients[k] * to_coords(k, t);
        if (t < group.invariant_factors().size()) {
            Integer d = group.invariant_factors()[t];
            acc %= d;
            if (acc < 0) acc += d;
        }
        y[t] = to_int64(acc);
    }
    return GroupElement(std::move(y));
}

Presentation present(const IntMatrix& relations, std::size_t generators) {
    if (relations.cols() != generators) throw std::invalid_argument("relation width differs from generator count");
    SmithForm f = snf(relations);
    std::vector<std::size_t> kept;
    std::vector<std::int64_t> factors;
    for (std::size_t i = 0; i < f.rank; ++i)
        if (f.D(i, i) != 1) {
            kept.push_back(i);
            factors.push_back(to_int64(f.D(i, i)));
        }
    const std::size_t free = generators - f.rank;
    for (std::size_t i = f.rank; i < generators; ++i) kept.push_back(i);

    Presentation p;
    p.group = FinAbelianGroup(std::move(factors), free);
    p.to_coords = IntMatrix(generators, kept.size());
    p.from_coords = IntMatrix(kept.size(), generators);
    for (std::size_t t = 0; t < kept.size(); ++t)
        for (std::size_t k = 0; k < generators; ++k) {
            p.to_coords(k, t) = f.V(k, kept[t]);
            p.from_coords(t, k) = f.V_inv(kept[t], k);
        }
    return p;
}

FinAbelianGroup quotient_group(const IntMatrix& rel) { return present(rel, rel.cols()).group; }

FinAbelianGroup homology(const IntMatrix& d_n, const IntMatrix& d_np1) {
    if (d_n.cols() != d_np1.rows())
        throw std::invalid_argument("boundary matrices do not compose: " + std::to_string(d_n.cols()) + " vs " +
                                    std::to_string(d_np1.rows()));
    IntMatrix prod = d_n * d_np1;
    for (std::size_t c = 0; c < prod.cols(); ++c)
        for (std::size_t r = 0; r < prod.rows(); ++r)
            if (prod(r, c) != 0)
                throw HomologyError(c, "d_n * d_np1 is nonzero in column " + std::to_string(c));

    const std::size_t cycles = d_n.cols() - rank(d_n);
    SmithForm f = snf(d_np1);
    std::vector<std::int64_t> torsion;
    for (std::size_t i = 0; i < f.rank; ++i)
        if (f.D(i, i) > 1) torsion.push_back(to_int64(f.D(i, i)));
    return FinAbelianGroup(std::move(torsion), cycles - f.rank);
}

TableGroup group_from_table(const std::vector<std::vector<std::size_t>>& add, std::size_t zero) {
    const std::size_t n = add.size();
    if (zero >= n) throw std::invalid_argument("zero outside the table");
    for (const auto& row : add) {
        if (row.size() != n) throw std::invalid_argument("addition table is not square");
        for (std::size_t x : row)
            if (x >= n) throw std::invalid_argument("addition table entry out of range");
    }
    for (std::size_t a = 0; a < n; ++a) {
        if (add[zero][a] != a || add[a][zero] != a) throw std::invalid_argument("zero is not an identity");
        bool has_inverse = false;
        for (std::size_t b = 0; b < n; ++b) {
            if (add[a][b] != add[b][a]) throw std::invalid_argument("addition table is not commutative");
            if (add[a][b] == zero) has_inverse = true;
            for (std::size_t c = 0; c < n; ++c)
                if (add[add[a][b]][c] != add[a][add[b][c]]) throw std::invalid_argument("addition is not associative");
        }
        if (!has_inverse) throw std::invalid_argument("element without inverse");
    }

    // Greedy generating set: repeatedly adjoin the first element outside the span.
    std::vector<std::size_t> gens;
    auto closure = [&](const std::vector<std::size_t>& g) {
        std::vector<bool> seen(n, false);
        std::deque<std::size_t> queue{zero};
        seen[zero] = true;
        while (!queue.empty()) {
            std::size_t x = queue.front();
            queue.pop_front();
            for (std::size_t h : g)
                if (!seen[add[x][h]]) {
                    seen[add[x][h]] = true;
                    queue.push_back(add[x][h]);
                }
        }
        return seen;
    };
    for (;;) {
        auto seen = closure(gens);
        auto it = std::find(seen.begin(), seen.end(), false);
        if (it == seen.end()) break;
        gens.push_back(static_cast<std::size_t>(it - seen.begin()));
    }

    // Spanning-tree coefficients; every non-tree edge contributes a relation.
    const std::size_t r = gens.size();
    std::vector<std::optional<std::vector<Integer>>> coeff(n);
    coeff[zero] = std::vector<Integer>(r);
    std::vector<std::vector<Integer>> relations;
    std::deque<std::size_t> queue{zero};
    while (!queue.empty()) {
        std::size_t x = queue.front();
        queue.pop_front();
        for (std::size_t t = 0; t < r; ++t) {
            std::size_t y = add[x][gens[t]];
            std::vector<Integer> v = *coeff[x];
            v[t] += 1;
            if (!coeff[y]) {
                coeff[y] = std::move(v);
                queue.push_back(y);
            } else if (v != *coeff[y]) {
                for (std::size_t k = 0; k < r; ++k) v[k] -= (*coeff[y])[k];
                relations.push_back(std::move(v));
            }
        }
    }

    Presentation p = present(IntMatrix::from_rows(relations, r), r);
    TableGroup out{p.group, {}};
    out.coords.reserve(n);
    for (std::size_t e = 0; e < n; ++e) out.coords.push_back(p.coordinates(*coeff[e]));
    if (!p.group.is_finite() || p.group.order() != n) throw std::logic_error("table group presentation has wrong order");
    return out;
}

}  // namespace polyhom
