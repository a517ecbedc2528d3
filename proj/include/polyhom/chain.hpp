#pragma once

// Simplex generators, integer chains and the alternating boundary operator.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "polyhom/algebra.hpp"

namespace polyhom {

using Support = std::vector<std::uint32_t>;

struct SimplexGen {
    Support support;
    std::string label;

    std::size_t dim() const { return support.size() - 1; }
    friend auto operator<=>(const SimplexGen&, const SimplexGen&) = default;
};

std::string to_string(const SimplexGen& g);

/// A finite set of generators closed under a face function. The face function
/// must drop the i-th smallest support element and satisfy the simplicial
/// identity; both are verified when the family is built.
class SimplexFamily {
  public:
    using FaceFn = std::function<SimplexGen(const SimplexGen&, std::size_t)>;

    /// Throws std::invalid_argument on the first violated requirement.
    SimplexFamily(std::vector<SimplexGen> generators, const FaceFn& face);

    /// Closure of the given supports under taking faces; every label empty.
    static SimplexFamily from_supports(const std::vector<Support>& supports);

    /// Generators over every subset of {0..vertices-1} with at most
    /// max_dim + 1 elements, labelled by a value in [0, values) on each
    /// sub-subset of size `arity` (restriction is the face map).
    static SimplexFamily colorings(std::uint32_t vertices, std::size_t max_dim, std::uint32_t values,
                                   std::size_t arity = 1);

    std::size_t max_dim() const { return by_dim_.empty() ? 0 : by_dim_.size() - 1; }
    /// Sorted generators of dimension d (empty beyond max_dim).
    const std::vector<SimplexGen>& generators(std::size_t d) const;
    bool contains(const SimplexGen& g) const;
    std::size_t index_of(const SimplexGen& g) const;

    const SimplexGen& face(const SimplexGen& g, std::size_t i) const;

  private:
    std::vector<std::vector<SimplexGen>> by_dim_;
    std::map<SimplexGen, std::vector<SimplexGen>> faces_;
    std::map<SimplexGen, std::size_t> index_;
};

class Chain {
  public:
    explicit Chain(std::size_t dim = 0) : dim_(dim) {}
    static Chain of(const SimplexGen& g, std::int64_t coef = 1);

    std::size_t dim() const { return dim_; }
    const std::map<SimplexGen, std::int64_t>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::int64_t coef(const SimplexGen& g) const;

    /// Adds coef * g; zero coefficients are dropped.
    void add(const SimplexGen& g, std::int64_t coef);

    Support support() const;

    Chain& operator+=(const Chain& o);
    Chain& operator-=(const Chain& o);
    friend Chain operator+(Chain a, const Chain& b) { return a += b; }
    friend Chain operator-(Chain a, const Chain& b) { return a -= b; }
    friend Chain operator*(std::int64_t k, const Chain& c);
    friend bool operator==(const Chain&, const Chain&) = default;

  private:
    std::size_t dim_;
    std::map<SimplexGen, std::int64_t> terms_;
};

Chain face_op(const SimplexFamily& fam, const Chain& c, std::size_t i);
Chain boundary(const SimplexFamily& fam, const Chain& c);

struct Classification {
    bool cycle = false;
    bool boundary = false;
    bool pocket = false;
};

Classification classify(const SimplexFamily& fam, const Chain& c, const std::vector<SimplexGen>& candidates);

/// Rows: generators of dimension d-1, columns: generators of dimension d.
IntMatrix boundary_matrix(const SimplexFamily& fam, std::size_t d);

/// H_d of the family's chain complex.
FinAbelianGroup family_homology(const SimplexFamily& fam, std::size_t d);

nlohmann::json chain_to_json(const Chain& c);
Chain chain_from_json(const nlohmann::json& j);

}  // namespace polyhom
