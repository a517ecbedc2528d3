#pragma once

// The binding group of a polygroupoid, read off from Q alone, and its action
// on the top-sort fibers.

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "polyhom/algebra.hpp"
#include "polyhom/polygroupoid.hpp"

namespace polyhom {

/// table[g][e] is G.element(g) acting on the top-sort element e, kNoElem on
/// lower sorts.
struct ActionTable {
    FinAbelianGroup group;
    std::vector<std::vector<ElemId>> table;

    ElemId act(const GroupElement& g, ElemId e) const { return table[group.index_of(g)][e]; }
    ElemId act(std::size_t g, ElemId e) const { return table[g][e]; }
};

/// Partition of F x F for the fiber F over z. Pair (a, b) of fiber positions
/// has index a * |F| + b.
struct TransportClasses {
    Config z;
    std::vector<ElemId> fiber;
    std::vector<std::size_t> class_of;  // per pair index, classes numbered by first pair
    std::size_t count = 0;
};

class ExtractionError : public std::invalid_argument {
  public:
    ExtractionError(const std::string& what, nlohmann::json witness)
        : std::invalid_argument(what), witness_(std::move(witness)) {}
    const nlohmann::json& witness() const { return witness_; }

  private:
    nlohmann::json witness_;
};

TransportClasses transport_classes(const Polygroupoid& H, const Config& z);

struct Extraction {
    FinAbelianGroup group;
    ActionTable action;
    TransportClasses classes;
    /// classes.count entries: the group index of each class.
    std::vector<std::size_t> class_group_index;
};

/// z is an n-configuration. Throws ExtractionError when the classes do not
/// form a group acting regularly, or the action cannot be carried coherently
/// to the other fibers.
Extraction extract(const Polygroupoid& H, const Config& z);
/// z = the first n vertices.
Extraction extract(const Polygroupoid& H);

/// Coordinate translation on standard(G, ...), or anything with the same ids.
ActionTable translation_action(const Polygroupoid& H, const FinAbelianGroup& G);

/// Checks "action-shape", "action-identity", "action-composition",
/// "regularity" and "action-law" exhaustively.
AxiomReport verify_action(const Polygroupoid& H, const ActionTable& act);

/// True when the counterexample of a failed verify_action check still fails.
bool action_counterexample_refails(const Polygroupoid& H, const ActionTable& act, const Check& failed);

nlohmann::json action_to_json(const Polygroupoid& H, const ActionTable& act);
ActionTable action_from_json(const Polygroupoid& H, const nlohmann::json& j);

/// Copy of act where g sends e to target instead (the old image of e is sent
/// wherever e used to go, keeping g a bijection).
ActionTable tamper_action(const ActionTable& act, std::size_t g, ElemId e, ElemId target);

}  // namespace polyhom
