#pragma once

// Finite n-ary quasigroupoids and polygroupoids.
//
// Sort k elements live over sorted k-element vertex configurations. For an
// element w over (a_1..a_k), pi(w)[j-1] is over the configuration with a_j
// removed. Q slots are 1-based in the public vocabulary (slot i of a Q tuple
// over (c_1..c_{n+1}) is over the configuration missing c_i); in code the
// tuple is an ordinary 0-based vector.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"

#include "polyhom/algebra.hpp"

namespace polyhom {

using Vertex = std::uint32_t;
using Config = std::vector<Vertex>;
using ElemId = std::uint32_t;
using Tuple = std::vector<ElemId>;

inline constexpr ElemId kNoElem = 0xffffffffu;

std::string config_key(const Config& c);
Config parse_config_key(const std::string& key);
/// c with its i-th (0-based) entry removed.
Config drop_vertex(const Config& c, std::size_t i);
/// All k-element subsets of a sorted vertex list, lexicographic.
std::vector<Config> subsets(const Config& vertices, std::size_t k);

class FormatError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct Check {
    std::string name;
    bool passed = true;
    std::string detail;
    nlohmann::json counterexample;
};

class AxiomReport {
  public:
    void pass(const std::string& name, const std::string& detail = "");
    void fail(const std::string& name, const std::string& detail, nlohmann::json counterexample);
    void merge(const AxiomReport& other);

    bool passed() const;
    const std::vector<Check>& checks() const { return checks_; }
    /// First check with this name that failed, else the first with this name.
    const Check* find(const std::string& name) const;
    const Check* first_failure() const;

    nlohmann::json to_json() const;
    std::string to_text() const;

  private:
    std::vector<Check> checks_;
};

/// Plain data with string identifiers; mirrors the JSON instance format.
struct PolygroupoidData {
    std::size_t arity = 0;
    std::vector<Vertex> vertices;
    std::map<Config, std::vector<std::string>> fibers;
    std::map<std::string, std::vector<std::string>> pi;
    std::vector<std::vector<std::string>> q;
};

class Polygroupoid {
  public:
    struct Element {
        std::string id;
        std::size_t sort = 0;
        Config config;
        Tuple pi;
        std::size_t local = 0;  // position within its fiber
    };

    Polygroupoid() = default;
    /// Structural validation only (references, sorts, arities). Axioms are
    /// left to check_axioms. Throws FormatError.
    explicit Polygroupoid(const PolygroupoidData& data);

    PolygroupoidData data() const;

    std::size_t arity() const { return arity_; }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    std::size_t size() const { return elements_.size(); }
    const Element& element(ElemId e) const { return elements_[e]; }
    const std::string& id(ElemId e) const { return elements_[e].id; }
    std::optional<ElemId> find(const std::string& id) const;
    ElemId at(const std::string& id) const;

    /// Sorted by identifier; empty when the configuration has no fiber.
    const std::vector<ElemId>& fiber(const Config& c) const;
    const std::map<Config, std::vector<ElemId>>& fibers() const { return fibers_; }
    std::vector<Config> configs(std::size_t sort) const;

    /// Sorted lexicographically by identifier.
    const std::vector<Tuple>& q() const { return q_; }
    bool has_q(const Tuple& t) const { return q_set_.count(t) > 0; }
    /// Elements x with Q(t with slot replaced by x); slot is 0-based.
    const std::vector<ElemId>& fillers(const Tuple& t, std::size_t slot) const;
    std::optional<ElemId> unique_filler(const Tuple& t, std::size_t slot) const;

    /// The (n+1)-configuration under a tuple of top-sort elements, if their
    /// configurations fit together as faces of one.
    std::optional<Config> tuple_config(const Tuple& t) const;

    std::vector<std::string> ids(const Tuple& t) const;
    Tuple lookup(const std::vector<std::string>& ids) const;

    struct TupleHash {
        std::size_t operator()(const Tuple& t) const noexcept;
    };

  private:
    std::size_t arity_ = 0;
    std::vector<Vertex> vertices_;
    std::vector<Element> elements_;
    std::unordered_map<std::string, ElemId> by_id_;
    std::map<Config, std::vector<ElemId>> fibers_;
    std::vector<Tuple> q_;
    std::unordered_set<Tuple, TupleHash> q_set_;
    std::unordered_map<Tuple, std::vector<ElemId>, TupleHash> horns_;
};

nlohmann::json polygroupoid_to_json(const Polygroupoid& H);
Polygroupoid polygroupoid_from_json(const nlohmann::json& j);

/// 1-based (i, j), i < j, of the first failing identity pi_i(w_j) = pi_{j-1}(w_i);
/// for sort 1, the first equal pair. Throws std::invalid_argument on mixed sorts.
std::optional<std::pair<std::size_t, std::size_t>> compatibility_witness(const Polygroupoid& H, const Tuple& t);
bool is_compatible(const Polygroupoid& H, const Tuple& t);
/// Identities not involving the 0-based slot `skip` (whose entry is ignored).
bool is_partially_compatible(const Polygroupoid& H, const Tuple& t, std::size_t skip);
/// The single identity between 0-based slots a < b.
bool pair_compatible(const Polygroupoid& H, ElemId wa, std::size_t a, ElemId wb, std::size_t b);

AxiomReport check_axioms(const Polygroupoid& H);

/// c is an (n+2)-configuration.
AxiomReport check_associativity(const Polygroupoid& H, const Config& c);
/// Every (n+2)-subset of the vertex set.
AxiomReport check_associativity(const Polygroupoid& H);

/// True when the counterexample attached to a failed check still exhibits
/// the failure on H.
bool counterexample_refails(const Polygroupoid& H, const Check& failed);

/// Calls visit(t) for every tuple over the faces of the (n+1)-configuration c
/// with slot `open` (0-based) left as kNoElem and all identities away from
/// the open slot holding.
void for_each_horn(const Polygroupoid& H, const Config& c, std::size_t open,
                   const std::function<void(const Tuple&)>& visit);

/// Every horn (partially compatible tuple with one slot open over an
/// (n+1)-configuration) and its number of Q fillers.
struct HornCount {
    std::size_t horns = 0;
    std::size_t exactly_one = 0;
    std::optional<nlohmann::json> first_bad;
};
HornCount count_horn_fillers(const Polygroupoid& H);

Polygroupoid standard(const FinAbelianGroup& G, const std::vector<Vertex>& vertices, std::size_t n);
Polygroupoid standard(const FinAbelianGroup& G, std::size_t vertex_count, std::size_t n);
/// Like standard, but Q over an (n+1)-configuration c asks the alternating
/// sum to equal defect[c] (zero when absent).
Polygroupoid twisted_standard(const FinAbelianGroup& G, const std::vector<Vertex>& vertices, std::size_t n,
                              const std::map<Config, GroupElement>& defect);
/// Identifier of the top-sort element of standard(G,...) with coordinates g.
std::string standard_id(const FinAbelianGroup& G, const Config& c, const GroupElement& g);

Polygroupoid scramble(const Polygroupoid& H, std::uint64_t seed);

using VertexPerm = std::map<Vertex, Vertex>;

struct InducedMap {
    std::optional<std::vector<ElemId>> image;  // indexed by ElemId
    std::string obstruction;                   // config key when absent
};

/// Lexicographically first sort-preserving bijection covering sigma,
/// commuting with the projections and preserving Q.
InducedMap induced_automorphism(const Polygroupoid& H, const VertexPerm& sigma);

/// Computes induced maps for the subgroup generated by `generators` and checks
/// they exist, are valid, and compose coherently below the top sort. Top-sort
/// agreement is counted in the detail of "composition-coherence".
AxiomReport check_symmetric_system(const Polygroupoid& H, const std::vector<VertexPerm>& generators);

}  // namespace polyhom
