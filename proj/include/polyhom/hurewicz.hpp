#pragma once

// Simplices over a polygroupoid, the epsilon map into the binding group, and
// the verdict comparing pocket classes with the binding group.
//
// Faces are 0-based: face i of a simplex over (v_0..v_n) lies over the
// configuration without v_i and fills Q slot i+1.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "polyhom/binding.hpp"

namespace polyhom {

class HurewiczError : public std::invalid_argument {
  public:
    HurewiczError(const std::string& what, nlohmann::json witness)
        : std::invalid_argument(what), witness_(std::move(witness)) {}
    const nlohmann::json& witness() const { return witness_; }

  private:
    nlohmann::json witness_;
};

struct AbstractFace {
    std::string id;
    Config config;
    ElemId selector = kNoElem;

    friend bool operator==(const AbstractFace&, const AbstractFace&) = default;
};

struct SimplexDatum {
    Config vertices;                  // n+1 vertices
    std::vector<AbstractFace> faces;  // face i over vertices minus the i-th
    std::vector<GroupElement> twists;

    ElemId embedded(const ActionTable& act, std::size_t i) const { return act.act(twists[i], faces[i].selector); }
    Tuple embedded(const ActionTable& act) const;
};

struct CoSimplexDatum {
    struct Entry {
        AbstractFace face;  // over vertices minus both
        GroupElement twist;
    };
    Config vertices;  // n+2 vertices
    std::map<std::pair<std::size_t, std::size_t>, Entry> pairs;  // keys i < j
};

/// Selector of each face is the first element of its fiber.
AbstractFace default_face(const Polygroupoid& H, const Config& c);
SimplexDatum make_simplex(const Polygroupoid& H, const Config& vertices, const std::vector<GroupElement>& twists);
CoSimplexDatum make_cosimplex(const Polygroupoid& H, const Config& vertices,
                              const std::map<std::pair<std::size_t, std::size_t>, GroupElement>& twists);

/// Reason g is malformed for (H, act), if it is.
std::optional<std::string> simplex_defect(const Polygroupoid& H, const ActionTable& act, const SimplexDatum& g);

/// The unique gamma with Q(embedded(0), ..., embedded(n-1), gamma.embedded(n)).
GroupElement epsilon(const Polygroupoid& H, const ActionTable& act, const SimplexDatum& g);
GroupElement epsilon(const Polygroupoid& H, const ActionTable& act,
                     const std::vector<std::pair<std::int64_t, SimplexDatum>>& chain);

/// Face k of the result is the pair {j, m}, m = k for k < j and k+1 otherwise.
SimplexDatum co_face(const CoSimplexDatum& h, std::size_t j);

/// sum_j (-1)^j epsilon(co_face(h, j)) == 0.
bool check_boundary_zero(const Polygroupoid& H, const ActionTable& act, const CoSimplexDatum& h);

/// twists' - twists when the alternating sum of the differences vanishes.
/// Throws std::invalid_argument unless g and g' share vertices and faces.
std::optional<std::vector<GroupElement>> natural_iso(const FinAbelianGroup& G, const SimplexDatum& g,
                                                     const SimplexDatum& g2);

/// Shifts the twist of face n by -gamma.
SimplexDatum twist_by(const FinAbelianGroup& G, const SimplexDatum& g, const GroupElement& gamma);

nlohmann::json simplex_to_json(const Polygroupoid& H, const SimplexDatum& g);
SimplexDatum simplex_from_json(const Polygroupoid& H, const FinAbelianGroup& G, const nlohmann::json& j);
nlohmann::json cosimplex_to_json(const Polygroupoid& H, const CoSimplexDatum& h);
CoSimplexDatum cosimplex_from_json(const Polygroupoid& H, const FinAbelianGroup& G, const nlohmann::json& j);

struct VerdictOptions {
    /// Twist assignments per (n+2)-configuration are enumerated when there
    /// are at most this many, otherwise sampled.
    std::size_t exhaustive_limit = 5000;
    /// Total boundary samples when sampling.
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
};

struct Verdict {
    AxiomReport stages;  // axioms, extract, well_defined, injective, surjective, pocket_group
    std::optional<FinAbelianGroup> group;
    std::optional<FinAbelianGroup> pocket_group;
    bool isomorphic = false;

    bool passed() const { return stages.passed() && isomorphic; }
    nlohmann::json to_json() const;
};

Verdict verdict(const Polygroupoid& H, const VerdictOptions& options = {});

/// Re-runs the failing piece of a verdict stage on H from its witness.
bool verdict_witness_refails(const Polygroupoid& H, const Check& failed);

}  // namespace polyhom
