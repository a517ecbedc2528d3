#include "polyhom/selftest.hpp"

#include <chrono>
#include <cstdio>
#include <functional>

#include "polyhom/binding.hpp"
#include "polyhom/chain.hpp"
#include "polyhom/hurewicz.hpp"
#include "polyhom/json_io.hpp"
#include "polyhom/rng.hpp"
#include "polyhom/tower.hpp"

namespace polyhom {

using nlohmann::json;

std::string CriterionResult::line(bool timing) const {
    std::string head = std::string(passed ? "PASS" : "FAIL") + " criterion " + std::to_string(id) + ": " + title;
    if (timing) {
        char buf[64];
        std::snprintf(buf, sizeof buf, " (%.2f s / %.0f s)", seconds, limit_seconds);
        head += buf;
    }
    return head + (detail.empty() ? "" : " - " + detail);
}

json CriterionResult::to_json() const {
    json j{{"id", id},       {"title", title},           {"passed", passed},
           {"seconds", seconds}, {"limit_seconds", limit_seconds}, {"detail", detail}};
    if (!witness.is_null()) j["witness"] = witness;
    return j;
}

Polygroupoid plant_horn_duplicate(const Polygroupoid& H) {
    PolygroupoidData d = H.data();
    if (d.q.empty()) throw std::invalid_argument("no Q tuples to duplicate");
    auto t = d.q.front();
    const auto& fiber = d.fibers.at(H.element(H.at(t.back())).config);
    if (fiber.size() < 2) throw std::invalid_argument("fiber too small to plant a second filler");
    t.back() = fiber[0] == t.back() ? fiber[1] : fiber[0];
    d.q.push_back(t);
    return Polygroupoid(d);
}

Polygroupoid plant_non_associative(const FinAbelianGroup& G, std::size_t vertex_count, std::size_t n) {
    if (G.is_trivial()) throw std::invalid_argument("a trivial group leaves nothing to plant");
    std::vector<Vertex> I(vertex_count);
    for (std::size_t v = 0; v < vertex_count; ++v) I[v] = static_cast<Vertex>(v);
    return twisted_standard(G, I, n, {{subsets(I, n + 1).front(), G.element(1)}});
}

namespace {

struct Instance {
    std::size_t n;
    FinAbelianGroup group;
    std::size_t vertices;

    std::string name() const {
        return "n=" + std::to_string(n) + " G=" + group.to_string() + " |I|=" + std::to_string(vertices);
    }
};

std::vector<FinAbelianGroup> small_groups() {
    return {FinAbelianGroup::cyclic(2), FinAbelianGroup::cyclic(3), FinAbelianGroup::cyclic(4),
            FinAbelianGroup::from_orders({2, 2})};
}

// n in {2,3}, the small groups (plus Z/8 for n = 2 when `with_eight`), |I| in n+1..n+3
std::vector<Instance> grid(bool with_eight, bool quick) {
    std::vector<Instance> out;
    for (std::size_t n : {2u, 3u}) {
        if (quick && n == 3) continue;
        auto groups = small_groups();
        if (with_eight && n == 2) groups.push_back(FinAbelianGroup::cyclic(8));
        for (const auto& G : groups)
            for (std::size_t v = n + 1; v <= n + 3; ++v) {
                if (quick && v == n + 3) continue;
                out.push_back({n, G, v});
            }
    }
    return out;
}

struct Outcome {
    bool passed = true;
    std::string detail;
    json witness;

    void fail(const std::string& what, json w = nullptr) {
        if (!passed) return;
        passed = false;
        detail = what;
        witness = std::move(w);
    }
};

// ---------------------------------------------------------------- 1

Outcome chain_axioms(const SelftestOptions& opt) {
    Outcome out;
    std::vector<std::pair<std::string, SimplexFamily>> families;
    families.emplace_back("full 4-simplex", SimplexFamily::from_supports({{0, 1, 2, 3, 4}}));
    families.emplace_back("vertex colorings", SimplexFamily::colorings(5, 4, 2, 1));
    families.emplace_back("edge colorings", SimplexFamily::colorings(5, 3, 2, 2));
    if (!opt.quick) families.emplace_back("vertex 3-colorings", SimplexFamily::colorings(5, 4, 3, 1));
    std::size_t generators = 0;
    for (const auto& [name, fam] : families) {
        for (std::size_t d = 0; d <= fam.max_dim(); ++d) {
            for (const auto& g : fam.generators(d)) {
                ++generators;
                if (d >= 2 && !boundary(fam, boundary(fam, Chain::of(g))).is_zero())
                    out.fail("boundary of boundary nonzero in " + name, {{"generator", to_string(g)}});
            }
            if (d >= 2) {
                const IntMatrix prod = boundary_matrix(fam, d - 1) * boundary_matrix(fam, d);
                if (!prod.is_zero()) out.fail("d_{d-1} d_d nonzero in " + name, {{"dimension", d}});
            }
        }
    }
    Rng rng(opt.seed);
    const std::size_t chains = 500;
    for (std::size_t k = 0; k < chains; ++k) {
        const auto& fam = families[rng.below(families.size())].second;
        const std::size_t d = 2 + rng.below(fam.max_dim() - 1);
        const auto& gens = fam.generators(d);
        Chain c(d);
        const std::size_t terms = 1 + rng.below(8);
        for (std::size_t t = 0; t < terms; ++t) c.add(gens[rng.below(gens.size())], rng.between(-5, 5));
        if (!boundary(fam, boundary(fam, c)).is_zero()) out.fail("random chain with nonzero double boundary", chain_to_json(c));
    }
    if (out.passed)
        out.detail = std::to_string(generators) + " generators in " + std::to_string(families.size()) + " families, " +
                     std::to_string(chains) + " random chains";
    return out;
}

// ---------------------------------------------------------------- 2

Outcome standard_axioms(const SelftestOptions& opt) {
    Outcome out;
    std::size_t count = 0;
    for (const auto& inst : grid(true, opt.quick)) {
        Polygroupoid H = standard(inst.group, inst.vertices, inst.n);
        if (opt.inject_fault && inst.vertices >= inst.n + 2)
            H = plant_non_associative(inst.group, inst.vertices, inst.n);
        AxiomReport r = check_axioms(H);
        r.merge(check_associativity(H));
        ++count;
        if (r.checks().size() < 5) out.fail(inst.name() + ": missing checks");
        if (const Check* bad = r.first_failure())
            out.fail(inst.name() + ": " + bad->name + " fails", {{"check", bad->name}, {"counterexample", bad->counterexample}});
    }
    if (out.passed) out.detail = std::to_string(count) + " standard models";
    return out;
}

// ---------------------------------------------------------------- 3

std::size_t binomial(std::size_t n, std::size_t k) {
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

Outcome horn_filling(const SelftestOptions& opt) {
    Outcome out;
    std::size_t horns = 0;
    for (const auto& inst : grid(true, opt.quick)) {
        const Polygroupoid H = standard(inst.group, inst.vertices, inst.n);
        const HornCount hc = count_horn_fillers(H);
        // lower sorts are singletons, so every tuple with one open slot is a horn
        std::size_t expected = binomial(inst.vertices, inst.n + 1) * (inst.n + 1);
        for (std::size_t i = 0; i < inst.n; ++i) expected *= inst.group.order();
        if (hc.horns != expected) out.fail(inst.name() + ": horn count " + std::to_string(hc.horns) + " != " + std::to_string(expected));
        if (hc.exactly_one != hc.horns) out.fail(inst.name() + ": a horn without exactly one filler", *hc.first_bad);
        horns += hc.horns;
    }
    if (out.passed) out.detail = std::to_string(horns) + " horns, each with one filler";
    return out;
}

// ---------------------------------------------------------------- 4, 5

Config random_base(Rng& rng, std::size_t vertices, std::size_t n) {
    std::vector<Vertex> I(vertices);
    for (std::size_t v = 0; v < vertices; ++v) I[v] = static_cast<Vertex>(v);
    rng.shuffle(I);
    Config z(I.begin(), I.begin() + static_cast<std::ptrdiff_t>(n));
    std::sort(z.begin(), z.end());
    return z;
}

template <class F>
Outcome over_scrambles(const SelftestOptions& opt, F&& per_instance, const std::string& noun) {
    Outcome out;
    const std::size_t seeds = opt.quick ? 10 : 100;
    std::size_t count = 0;
    for (const auto& inst : grid(false, opt.quick)) {
        const Polygroupoid base = standard(inst.group, inst.vertices, inst.n);
        Rng rng(opt.seed * 7919 + inst.vertices * 31 + inst.n);
        for (std::size_t s = 0; s < seeds && out.passed; ++s) {
            const std::uint64_t seed = rng.next();
            const Polygroupoid H = scramble(base, seed);
            const Config z = random_base(rng, inst.vertices, inst.n);
            try {
                per_instance(inst, H, z, seed, out);
            } catch (const ExtractionError& e) {
                out.fail(inst.name() + " seed " + std::to_string(seed) + ": " + e.what(), e.witness());
            }
            ++count;
        }
    }
    if (out.passed) out.detail = std::to_string(count) + " " + noun;
    return out;
}

Outcome blind_extraction(const SelftestOptions& opt) {
    return over_scrambles(
        opt,
        [](const Instance& inst, const Polygroupoid& H, const Config& z, std::uint64_t seed, Outcome& out) {
            const Extraction ex = extract(H, z);
            if (!iso_check(ex.group, inst.group))
                out.fail(inst.name() + " seed " + std::to_string(seed) + ": extracted " + ex.group.to_string(),
                         {{"z", config_key(z)}, {"seed", seed}});
        },
        "scrambled instances");
}

Outcome action_law(const SelftestOptions& opt) {
    return over_scrambles(
        opt,
        [](const Instance& inst, const Polygroupoid& H, const Config& z, std::uint64_t seed, Outcome& out) {
            const Extraction ex = extract(H, z);
            const AxiomReport r = verify_action(H, ex.action);
            if (const Check* bad = r.first_failure())
                out.fail(inst.name() + " seed " + std::to_string(seed) + ": " + bad->name,
                         {{"check", bad->name}, {"counterexample", bad->counterexample}});
        },
        "extracted actions verified exhaustively");
}

// ---------------------------------------------------------------- 6

Outcome hurewicz_verdicts(const SelftestOptions& opt) {
    Outcome out;
    std::size_t count = 0;
    for (const auto& inst : grid(true, opt.quick)) {
        for (int variant = 0; variant < 2; ++variant) {
            Polygroupoid H = standard(inst.group, inst.vertices, inst.n);
            if (variant == 1) H = scramble(H, opt.seed + count);
            VerdictOptions vo;
            vo.seed = opt.seed + count;
            const Verdict v = verdict(H, vo);
            ++count;
            if (!v.passed()) {
                const Check* bad = v.stages.first_failure();
                out.fail(inst.name() + (variant ? " scrambled" : "") + ": " + (bad ? bad->name : "pocket group"),
                         v.to_json());
            } else if (!iso_check(*v.pocket_group, inst.group)) {
                out.fail(inst.name() + ": pocket group " + v.pocket_group->to_string());
            }
        }
    }
    if (out.passed) out.detail = std::to_string(count) + " verdicts with all stages passing";
    return out;
}

// ---------------------------------------------------------------- 7

Outcome tower(const SelftestOptions&) {
    Outcome out;
    const std::vector<std::int64_t> orders{8, 4, 2};
    const PolyTower T = standard_tower(orders, {0, 1, 2, 3}, 2);
    const AxiomReport r = check_tower(T);
    if (const Check* bad = r.first_failure()) {
        out.fail("tower check " + bad->name, bad->counterexample);
        return out;
    }
    if (!r.find("q-coherence") || !r.find("q-coherence")->passed) out.fail("no Q-coherence check");

    std::map<Node, FinAbelianGroup> groups;
    for (std::size_t i = 0; i < orders.size(); ++i) groups[T.poset.nodes[i]] = FinAbelianGroup::cyclic(orders[i]);
    const auto acts = translation_actions(T, groups);
    const GroupTower GT = group_tower(T, acts);
    std::vector<FinAbelianGroup> chain;
    for (auto d : orders) chain.push_back(FinAbelianGroup::cyclic(d));
    const GroupTower expected = chain_group_tower(chain, reduction_bonds(orders));
    for (const auto& e : T.poset.leq)
        if (!(GT.chi.at(e) == expected.chi.at(e)))
            out.fail("induced hom on " + e.first + "," + e.second + " is not the input surjection",
                     {{"induced", hom_to_json(GT.chi.at(e))}, {"expected", hom_to_json(expected.chi.at(e))}});
    if (const Check* bad = check_tower(GT).first_failure()) out.fail("induced group tower: " + bad->name, bad->counterexample);

    const InverseLimit L = inverse_limit(GT);
    if (!iso_check(L.group, FinAbelianGroup::cyclic(8))) out.fail("inverse limit " + L.group.to_string());
    if (L.group.order() != enumerate_threads(GT).size()) out.fail("limit order differs from the thread count");
    for (const auto& [u, p] : L.projections)
        if (!p.is_surjective()) out.fail("projection to " + u + " is not surjective");
    for (const auto& z : subsets(T.nodes.at("u0").vertices(), 2))
        if (const Check* bad = check_thread_action(T, acts, z, GT, L).first_failure())
            out.fail("thread action over " + config_key(z) + ": " + bad->name, bad->counterexample);
    if (out.passed) out.detail = "limit " + L.group.to_string() + ", induced homs are the reductions";
    return out;
}

// ---------------------------------------------------------------- 8

Outcome fault_sensitivity(const SelftestOptions&) {
    Outcome out;
    std::size_t planted = 0;
    auto expect = [&](const std::string& what, bool detected, bool refails, bool clean_passes) {
        ++planted;
        if (!detected) out.fail(what + " went undetected");
        else if (!refails) out.fail(what + ": counterexample does not re-fail");
        else if (!clean_passes) out.fail(what + ": counterexample also fails the clean instance");
    };
    for (std::size_t n : {2u, 3u}) {
        const auto G = FinAbelianGroup::cyclic(4);
        const Polygroupoid clean = standard(G, n + 2, n);
        const std::string tag = " (n=" + std::to_string(n) + ")";

        const Polygroupoid dup = plant_horn_duplicate(clean);
        const AxiomReport rd = check_axioms(dup);
        const Check* hd = rd.find("horn-uniqueness");
        expect("horn duplicate" + tag, hd && !hd->passed, hd && counterexample_refails(dup, *hd),
               hd && !counterexample_refails(clean, *hd));

        const Polygroupoid na = plant_non_associative(G, n + 2, n);
        const AxiomReport ra = check_associativity(na);
        const Check* ha = ra.first_failure();
        expect("non-associative Q" + tag, ha != nullptr, ha && counterexample_refails(na, *ha),
               ha && !counterexample_refails(clean, *ha));

        const ActionTable good = translation_action(clean, G);
        const ElemId e = clean.at(standard_id(G, subsets(clean.vertices(), n).front(), G.element(1)));
        const ElemId target = clean.at(standard_id(G, subsets(clean.vertices(), n).front(), G.element(0)));
        const ActionTable bad = tamper_action(good, 1, e, target);
        const AxiomReport rt = verify_action(clean, bad);
        const Check* ht = rt.find("action-law");
        expect("tampered action" + tag, ht && !ht->passed, ht && action_counterexample_refails(clean, bad, *ht),
               ht && !action_counterexample_refails(clean, good, *ht));
    }
    {
        const PolyTower T = standard_tower({4, 2}, {0, 1, 2, 3}, 2);
        const Edge edge{"u1", "u0"};
        const auto& Hv = T.nodes.at("u0");
        const auto& Hu = T.nodes.at("u1");
        const ElemId x = Hv.at(standard_id(FinAbelianGroup::cyclic(4), {1, 2}, FinAbelianGroup::cyclic(4).element(1)));
        const ElemId wrong = Hu.at(standard_id(FinAbelianGroup::cyclic(2), {1, 2}, FinAbelianGroup::cyclic(2).element(0)));
        const PolyTower bad = tamper_rho(T, edge, x, wrong);
        const AxiomReport r = check_tower(bad);
        const Check* h = r.first_failure();
        expect("tampered rho", h != nullptr, h && tower_counterexample_refails(bad, *h),
               h && !tower_counterexample_refails(T, *h));
        const std::map<Node, FinAbelianGroup> groups{{"u0", FinAbelianGroup::cyclic(4)}, {"u1", FinAbelianGroup::cyclic(2)}};
        const auto acts = translation_actions(bad, groups);
        bool two_witnesses = false;
        try {
            induced_hom(bad, edge, acts.at("u1"), acts.at("u0"));
        } catch (const InducedHomError& err) {
            two_witnesses = err.witness().at("witnesses").size() == 2;
        }
        ++planted;
        if (!two_witnesses) out.fail("tampered rho: induced hom did not report two witnesses");
    }
    if (out.passed) out.detail = std::to_string(planted) + " planted faults detected with re-failing witnesses";
    return out;
}

// ---------------------------------------------------------------- 9

Outcome homology_kernel(const SelftestOptions& opt) {
    Outcome out;
    const auto hollow = SimplexFamily::from_supports({{0, 1}, {1, 2}, {0, 2}});
    const auto h1 = family_homology(hollow, 1);
    if (!(h1.free_rank() == 1 && h1.invariant_factors().empty())) out.fail("hollow triangle H_1 = " + h1.to_string());
    const auto filled = SimplexFamily::from_supports({{0, 1, 2}});
    if (!family_homology(filled, 1).is_trivial()) out.fail("filled triangle H_1 = " + family_homology(filled, 1).to_string());

    Rng rng(opt.seed + 9);
    const std::size_t trials = 500;
    for (std::size_t t = 0; t < trials && out.passed; ++t) {
        const std::size_t r = 1 + rng.below(6), c = 1 + rng.below(6);
        IntMatrix A(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) A(i, j) = rng.between(-9, 9);
        const SmithForm S = snf(A);
        const json w = matrix_to_json(A);
        if (!(S.U * A * S.V == S.D)) out.fail("U A V != D", w);
        const auto d = S.diagonal();
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                if (i != j && S.D(i, j) != 0) out.fail("D is not diagonal", w);
        for (std::size_t i = 0; i + 1 < d.size(); ++i)
            if (d[i] < 0 || (d[i] == 0 && d[i + 1] != 0) || (d[i] != 0 && d[i + 1] % d[i] != 0))
                out.fail("diagonal entries do not divide", w);
        const Integer du = determinant(S.U), dv = determinant(S.V);
        if ((du != 1 && du != -1) || (dv != 1 && dv != -1)) out.fail("U or V is not unimodular", w);
        if (!(S.U * S.U_inv == IntMatrix::identity(r)) || !(S.V * S.V_inv == IntMatrix::identity(c)))
            out.fail("stored inverses are wrong", w);
    }
    if (out.passed) out.detail = "H_1 checks and " + std::to_string(trials) + " Smith forms";
    return out;
}

struct Spec {
    int id;
    const char* title;
    double limit;
    std::function<Outcome(const SelftestOptions&)> run;
};

const std::vector<Spec>& specs() {
    static const std::vector<Spec> all{
        {1, "chain axioms", 5, chain_axioms},
        {2, "standard polygroupoid axioms", 60, standard_axioms},
        {3, "horn-filling count", 10, horn_filling},
        {4, "blind extraction", 120, blind_extraction},
        {5, "action law", 60, action_law},
        {6, "Hurewicz verdict", 180, hurewicz_verdicts},
        {7, "tower", 30, tower},
        {8, "fault sensitivity", 30, fault_sensitivity},
        {9, "homology kernel", 10, homology_kernel},
    };
    return all;
}

}  // namespace

CriterionResult run_criterion(int id, const SelftestOptions& options) {
    for (const auto& s : specs()) {
        if (s.id != id) continue;
        CriterionResult res;
        res.id = id;
        res.title = s.title;
        res.limit_seconds = s.limit;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = s.run(options);
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        res.passed = o.passed && res.seconds <= res.limit_seconds;
        res.detail = o.passed && res.seconds > res.limit_seconds ? "over the time limit; " + o.detail : o.detail;
        res.witness = o.witness;
        return res;
    }
    throw std::invalid_argument("no criterion " + std::to_string(id));
}

std::vector<CriterionResult> run_selftest(const SelftestOptions& options) {
    std::vector<CriterionResult> out;
    for (const auto& s : specs()) {
        if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), s.id) == options.only.end())
            continue;
        out.push_back(run_criterion(s.id, options));
    }
    return out;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.passed) return false;
    return !results.empty();
}

}  // namespace polyhom
