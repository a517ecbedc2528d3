#pragma once

// Exact integer linear algebra and finite abelian groups.
//
// Everything here works over arbitrary-precision integers. Matrices are small
// (desk scale), so the Smith normal form is the plain dense algorithm with a
// smallest-absolute-value pivot.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace polyhom {

using Integer = boost::multiprecision::cpp_int;

class IntMatrix {
  public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols);
    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);

    static IntMatrix identity(std::size_t n);
    static IntMatrix diagonal(const std::vector<Integer>& diag);
    static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    IntMatrix transpose() const;
    bool is_zero() const;
    std::vector<Integer> column(std::size_t c) const;
    std::vector<Integer> row(std::size_t r) const;

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

    std::string to_string() const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

std::vector<Integer> operator*(const IntMatrix& a, const std::vector<Integer>& x);

/// Smith normal form D = U * A * V with U, V unimodular and
/// d_1 | d_2 | ... on the (nonnegative) diagonal.
struct SmithForm {
    IntMatrix U;
    IntMatrix D;
    IntMatrix V;
    IntMatrix U_inv;
    IntMatrix V_inv;
    std::size_t rank = 0;

    std::vector<Integer> diagonal() const;
};

SmithForm snf(const IntMatrix& A);

Integer determinant(const IntMatrix& A);
std::size_t rank(const IntMatrix& A);

/// Columns form a basis of the integer kernel {x : A x = 0}.
IntMatrix kernel_basis(const IntMatrix& A);

/// Columns form a basis of the lattice spanned by the columns of A.
IntMatrix column_basis(const IntMatrix& A);

/// Integer solution of A x = b, if b lies in the integer column span of A.
std::optional<std::vector<Integer>> image_solve(const IntMatrix& A, const std::vector<Integer>& b);

class GroupElement;

/// Finite(ly generated) abelian group in invariant-factor form
/// Z/d_1 + ... + Z/d_k + Z^free_rank with d_i >= 2 and d_i | d_{i+1}.
class FinAbelianGroup {
  public:
    FinAbelianGroup() = default;

    /// Throws std::invalid_argument unless the factors already form a valid chain.
    FinAbelianGroup(std::vector<std::int64_t> invariant_factors, std::size_t free_rank = 0);

    /// Normalizes any list of cyclic orders (CRT), e.g. {2, 3} -> Z/6. Orders of 1 vanish.
    static FinAbelianGroup from_orders(const std::vector<std::int64_t>& orders);
    static FinAbelianGroup cyclic(std::int64_t order);
    static FinAbelianGroup trivial() { return {}; }

    const std::vector<std::int64_t>& invariant_factors() const { return factors_; }
    std::size_t free_rank() const { return free_rank_; }
    std::size_t rank() const { return factors_.size() + free_rank_; }
    bool is_finite() const { return free_rank_ == 0; }
    bool is_trivial() const { return factors_.empty() && free_rank_ == 0; }

    /// Number of elements; throws std::logic_error for infinite groups.
    std::size_t order() const;

    GroupElement zero() const;
    GroupElement add(const GroupElement& a, const GroupElement& b) const;
    GroupElement negate(const GroupElement& a) const;
    GroupElement sub(const GroupElement& a, const GroupElement& b) const;
    GroupElement scale(const GroupElement& a, std::int64_t k) const;
    GroupElement reduce(std::vector<std::int64_t> coords) const;
    bool contains(const GroupElement& a) const;

    /// Mixed-radix enumeration, first coordinate fastest. Finite groups only.
    std::size_t index_of(const GroupElement& a) const;
    GroupElement element(std::size_t index) const;
    std::vector<GroupElement> elements() const;

    /// "Z/2 + Z/4", "Z^2", "0".
    std::string to_string() const;

    friend bool operator==(const FinAbelianGroup&, const FinAbelianGroup&) = default;

  private:
    std::vector<std::int64_t> factors_;
    std::size_t free_rank_ = 0;
};

class GroupElement {
  public:
    GroupElement() = default;
    explicit GroupElement(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {}

    const std::vector<std::int64_t>& coords() const { return coords_; }
    std::size_t size() const { return coords_.size(); }
    std::int64_t operator[](std::size_t i) const { return coords_[i]; }
    bool is_zero() const;

    /// Comma-joined coordinates ("" for the trivial group).
    std::string key() const;

    friend auto operator<=>(const GroupElement&, const GroupElement&) = default;

  private:
    std::vector<std::int64_t> coords_;
};

/// Homomorphism between groups, given by integer coefficients on generators:
/// column j holds the image of the j-th source generator.
class GroupHom {
  public:
    GroupHom(FinAbelianGroup source, FinAbelianGroup target,
             std::vector<std::vector<std::int64_t>> matrix);

    static GroupHom identity(const FinAbelianGroup& g);

    const FinAbelianGroup& source() const { return source_; }
    const FinAbelianGroup& target() const { return target_; }
    /// matrix()[i][j]: target coordinate i of the image of source generator j.
    const std::vector<std::vector<std::int64_t>>& matrix() const { return matrix_; }

    GroupElement apply(const GroupElement& x) const;

    /// d_j * (column j) vanishes in the target for every torsion generator j.
    bool respects_orders() const;
    bool is_surjective() const;

    /// (*this) o inner.
    GroupHom compose(const GroupHom& inner) const;

    /// Entries reduced modulo the target factors.
    GroupHom canonical() const;

    friend bool operator==(const GroupHom& a, const GroupHom& b);

  private:
    FinAbelianGroup source_;
    FinAbelianGroup target_;
    std::vector<std::vector<std::int64_t>> matrix_;
};

/// The group Z^cols / rowspace(relations), together with the change of
/// coordinates to its invariant-factor form.
struct Presentation {
    FinAbelianGroup group;
    /// cols x rank(group). Coordinates of a generator-coefficient row vector x
    /// are x * to_coords, reduced modulo the invariant factors.
    IntMatrix to_coords;
    /// rank(group) x cols. Row t is a coefficient vector representing the
    /// t-th invariant generator.
    IntMatrix from_coords;

    GroupElement coordinates(const std::vector<Integer>& coefficients) const;
};

Presentation present(const IntMatrix& relations, std::size_t generators);

/// Z^cols / rowspace(rel).
FinAbelianGroup quotient_group(const IntMatrix& rel);

class HomologyError : public std::invalid_argument {
  public:
    HomologyError(std::size_t column, const std::string& what)
        : std::invalid_argument(what), column_(column) {}
    std::size_t column() const { return column_; }

  private:
    std::size_t column_;
};

/// ker(d_n) / im(d_np1). d_n is (dim C_{n-1}) x (dim C_n), d_np1 is
/// (dim C_n) x (dim C_{n+1}). Throws HomologyError naming the first column of
/// d_np1 whose image under d_n is nonzero.
FinAbelianGroup homology(const IntMatrix& d_n, const IntMatrix& d_np1);

bool iso_check(const FinAbelianGroup& a, const FinAbelianGroup& b);

/// Abstract finite abelian group given by an addition table on {0..size-1}.
struct TableGroup {
    FinAbelianGroup group;
    /// coords[e] are the invariant-factor coordinates of table element e.
    std::vector<GroupElement> coords;
};

/// Recovers the invariant-factor form of a finite abelian group from its
/// addition table. Throws std::invalid_argument if the table is not an
/// abelian group with the given zero.
TableGroup group_from_table(const std::vector<std::vector<std::size_t>>& add, std::size_t zero);

}  // namespace polyhom
