#pragma once

// Finite directed systems of groups and of polygroupoids, their inverse
// limits, and the maps between binding groups they induce.

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "polyhom/binding.hpp"

namespace polyhom {

using Node = std::string;
/// (u, v) with u <= v.
using Edge = std::pair<Node, Node>;

struct DirectedPoset {
    std::vector<Node> nodes;
    std::vector<Edge> leq;

    bool less_equal(const Node& u, const Node& v) const;
    /// Nodes u0 >= u1 >= ... >= u{m-1}.
    static DirectedPoset chain(std::size_t m);
};

/// Checks "poset": reflexive, antisymmetric, transitive, directed.
AxiomReport check_poset(const DirectedPoset& J);

/// chi[(u, v)] : G_v -> G_u for every u <= v.
struct GroupTower {
    DirectedPoset poset;
    std::map<Node, FinAbelianGroup> groups;
    std::map<Edge, GroupHom> chi;
};

/// rho[(u, v)][e] is the image in H_u of the top-sort element e of H_v
/// (kNoElem elsewhere). Lower sorts are shared by identifier.
struct PolyTower {
    DirectedPoset poset;
    std::map<Node, Polygroupoid> nodes;
    std::map<Edge, std::vector<ElemId>> rho;
};

/// "poset", "bond-shape", "surjective", "identity", "functorial".
AxiomReport check_tower(const GroupTower& T);
/// "poset", "node-axioms", "rho-shape", "surjective", "identity",
/// "functorial", "pi-commutes", "q-coherence".
AxiomReport check_tower(const PolyTower& T);

bool tower_counterexample_refails(const GroupTower& T, const Check& failed);
bool tower_counterexample_refails(const PolyTower& T, const Check& failed);

struct InverseLimit {
    FinAbelianGroup group;
    std::map<Node, GroupHom> projections;
};

/// Threads of a finite tower of finite groups, in invariant-factor form.
InverseLimit inverse_limit(const GroupTower& T);

/// Every thread, by brute force over the product.
std::vector<std::map<Node, GroupElement>> enumerate_threads(const GroupTower& T);

class InducedHomError : public std::invalid_argument {
  public:
    InducedHomError(const std::string& what, nlohmann::json witness)
        : std::invalid_argument(what), witness_(std::move(witness)) {}
    const nlohmann::json& witness() const { return witness_; }

  private:
    nlohmann::json witness_;
};

/// The hom chi : G_v -> G_u with chi(g).rho(w) = rho(g.w), checked on every w.
GroupHom induced_hom(const PolyTower& T, const Edge& edge, const ActionTable& act_u, const ActionTable& act_v);

/// Groups and induced homs of a tower with one action per node.
GroupTower group_tower(const PolyTower& T, const std::map<Node, ActionTable>& acts);

/// Extracted action per node.
std::map<Node, ActionTable> extract_actions(const PolyTower& T);

/// groups[0] is the top; bonds[i] : groups[i] -> groups[i+1]. Node ui
/// carries standard(groups[i], vertices, n).
PolyTower standard_tower(const std::vector<FinAbelianGroup>& groups, const std::vector<GroupHom>& bonds,
                         const std::vector<Vertex>& vertices, std::size_t n);
/// The same chain as a group tower.
GroupTower chain_group_tower(const std::vector<FinAbelianGroup>& groups, const std::vector<GroupHom>& bonds);
/// Reduction maps between cyclic groups whose orders divide each other.
std::vector<GroupHom> reduction_bonds(const std::vector<std::int64_t>& cyclic_orders);
/// Translation action per node of a standard tower.
std::map<Node, ActionTable> translation_actions(const PolyTower& T, const std::map<Node, FinAbelianGroup>& groups);
/// Cyclic orders, each dividing the previous, with reduction maps.
PolyTower standard_tower(const std::vector<std::int64_t>& cyclic_orders, const std::vector<Vertex>& vertices,
                         std::size_t n);

/// The limit acts on threads of fiber elements over z componentwise.
/// Checks "thread-closure" and "thread-regularity".
AxiomReport check_thread_action(const PolyTower& T, const std::map<Node, ActionTable>& acts, const Config& z,
                                const GroupTower& groups, const InverseLimit& limit);

/// Copy of T where rho(u, v) sends e to target.
PolyTower tamper_rho(const PolyTower& T, const Edge& edge, ElemId e, ElemId target);

nlohmann::json poset_to_json(const DirectedPoset& J);
DirectedPoset poset_from_json(const nlohmann::json& j);
nlohmann::json tower_to_json(const PolyTower& T);
PolyTower tower_from_json(const nlohmann::json& j);
/// {"poset": ..., "groups": {"u": group}, "chi": {"u,v": matrix}}
nlohmann::json group_tower_to_json(const GroupTower& T);
GroupTower group_tower_from_json(const nlohmann::json& j);
nlohmann::json hom_to_json(const GroupHom& h);

}  // namespace polyhom
