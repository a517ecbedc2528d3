#include "polyhom/polygroupoid.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "polyhom/rng.hpp"

namespace polyhom {

using nlohmann::json;

// ---------------------------------------------------------------- configs

std::string config_key(const Config& c) {
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(c[i]);
    }
    return s;
}

Config parse_config_key(const std::string& key) {
    Config c;
    std::size_t pos = 0;
    while (pos <= key.size()) {
        std::size_t end = key.find(',', pos);
        if (end == std::string::npos) end = key.size();
        const std::string part = key.substr(pos, end - pos);
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
            throw FormatError("bad configuration key \"" + key + "\"");
        c.push_back(static_cast<Vertex>(std::stoul(part)));
        pos = end + 1;
    }
    return c;
}

Config drop_vertex(const Config& c, std::size_t i) {
    Config out;
    out.reserve(c.size() - 1);
    for (std::size_t k = 0; k < c.size(); ++k)
        if (k != i) out.push_back(c[k]);
    return out;
}

std::vector<Config> subsets(const Config& vertices, std::size_t k) {
    std::vector<Config> out;
    if (k > vertices.size()) return out;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
        Config c;
        for (std::size_t i : idx) c.push_back(vertices[i]);
        out.push_back(std::move(c));
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == vertices.size() - k + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

// ---------------------------------------------------------------- reports

void AxiomReport::pass(const std::string& name, const std::string& detail) { checks_.push_back({name, true, detail, {}}); }

void AxiomReport::fail(const std::string& name, const std::string& detail, json counterexample) {
    checks_.push_back({name, false, detail, std::move(counterexample)});
}

void AxiomReport::merge(const AxiomReport& other) {
    checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
}

bool AxiomReport::passed() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.passed; });
}

const Check* AxiomReport::find(const std::string& name) const {
    const Check* first = nullptr;
    for (const auto& c : checks_) {
        if (c.name != name) continue;
        if (!c.passed) return &c;
        if (!first) first = &c;
    }
    return first;
}

const Check* AxiomReport::first_failure() const {
    for (const auto& c : checks_)
        if (!c.passed) return &c;
    return nullptr;
}

json AxiomReport::to_json() const {
    json checks = json::array();
    for (const auto& c : checks_) {
        json j{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}};
        if (!c.passed) j["counterexample"] = c.counterexample;
        checks.push_back(std::move(j));
    }
    return {{"passed", passed()}, {"checks", checks}};
}

std::string AxiomReport::to_text() const {
    std::ostringstream os;
    for (const auto& c : checks_) {
        os << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) os << ": " << c.detail;
        os << "\n";
        if (!c.passed && !c.counterexample.is_null()) os << "  counterexample: " << c.counterexample.dump() << "\n";
    }
    os << (passed() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

// ---------------------------------------------------------------- structure

std::size_t Polygroupoid::TupleHash::operator()(const Tuple& t) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (ElemId e : t) {
        h ^= e + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

Polygroupoid::Polygroupoid(const PolygroupoidData& data) : arity_(data.arity) {
    if (arity_ < 2) throw FormatError("arity must be at least 2");
    vertices_ = data.vertices;
    std::sort(vertices_.begin(), vertices_.end());
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
        throw FormatError("duplicate vertex");
    const std::set<Vertex> vset(vertices_.begin(), vertices_.end());

    std::vector<std::pair<std::string, Config>> all;
    for (const auto& [c, ids] : data.fibers) {
        const std::string key = config_key(c);
        if (c.empty() || c.size() > arity_) throw FormatError("fiber \"" + key + "\" has an invalid size");
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!vset.count(c[i])) throw FormatError("fiber \"" + key + "\" uses an unknown vertex");
            if (i > 0 && c[i - 1] >= c[i]) throw FormatError("fiber \"" + key + "\" is not strictly increasing");
        }
        if (c.size() == 1 && ids.size() != 1) throw FormatError("vertex fiber \"" + key + "\" must hold one element");
        for (const auto& id : ids) all.emplace_back(id, c);
    }
    std::sort(all.begin(), all.end());
    for (std::size_t i = 1; i < all.size(); ++i)
        if (all[i].first == all[i - 1].first) throw FormatError("duplicate element id \"" + all[i].first + "\"");

    elements_.resize(all.size());
    for (ElemId e = 0; e < all.size(); ++e) {
        elements_[e].id = all[e].first;
        elements_[e].config = all[e].second;
        elements_[e].sort = all[e].second.size();
        by_id_.emplace(all[e].first, e);
        fibers_[all[e].second].push_back(e);
    }
    for (auto& [c, es] : fibers_)
        for (std::size_t i = 0; i < es.size(); ++i) elements_[es[i]].local = i;

    for (const auto& [id, refs] : data.pi) {
        auto it = by_id_.find(id);
        if (it == by_id_.end()) throw FormatError("pi given for unknown element \"" + id + "\"");
        Element& el = elements_[it->second];
        if (el.sort < 2) throw FormatError("pi given for vertex element \"" + id + "\"");
        if (refs.size() != el.sort)
            throw FormatError("pi of \"" + id + "\" must have " + std::to_string(el.sort) + " entries");
        for (const auto& r : refs) {
            auto rt = by_id_.find(r);
            if (rt == by_id_.end()) throw FormatError("pi of \"" + id + "\" names unknown element \"" + r + "\"");
            if (elements_[rt->second].sort != el.sort - 1)
                throw FormatError("pi of \"" + id + "\" names \"" + r + "\" of the wrong sort");
            el.pi.push_back(rt->second);
        }
    }
    for (const auto& el : elements_)
        if (el.sort >= 2 && el.pi.empty()) throw FormatError("element \"" + el.id + "\" has no pi");

    for (const auto& ids : data.q) {
        if (ids.size() != arity_ + 1) throw FormatError("Q tuple with wrong length");
        Tuple t;
        for (const auto& id : ids) {
            auto it = by_id_.find(id);
            if (it == by_id_.end()) throw FormatError("Q names unknown element \"" + id + "\"");
            if (elements_[it->second].sort != arity_) throw FormatError("Q names \"" + id + "\" of a lower sort");
            t.push_back(it->second);
        }
        if (!q_set_.insert(t).second) throw FormatError("duplicate Q tuple");
        q_.push_back(std::move(t));
    }
    std::sort(q_.begin(), q_.end());
    for (const auto& t : q_)
        for (std::size_t s = 0; s < t.size(); ++s) {
            Tuple key = t;
            key[s] = kNoElem;
            horns_[key].push_back(t[s]);
        }
    for (auto& [k, v] : horns_) std::sort(v.begin(), v.end());
}

PolygroupoidData Polygroupoid::data() const {
    PolygroupoidData d;
    d.arity = arity_;
    d.vertices = vertices_;
    for (const auto& [c, es] : fibers_) {
        auto& out = d.fibers[c];
        for (ElemId e : es) out.push_back(elements_[e].id);
    }
    for (const auto& el : elements_)
        if (el.sort >= 2) d.pi[el.id] = ids(el.pi);
    for (const auto& t : q_) d.q.push_back(ids(t));
    return d;
}

std::optional<ElemId> Polygroupoid::find(const std::string& id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

ElemId Polygroupoid::at(const std::string& id) const {
    auto e = find(id);
    if (!e) throw std::invalid_argument("unknown element \"" + id + "\"");
    return *e;
}

const std::vector<ElemId>& Polygroupoid::fiber(const Config& c) const {
    static const std::vector<ElemId> none;
    auto it = fibers_.find(c);
    return it == fibers_.end() ? none : it->second;
}

std::vector<Config> Polygroupoid::configs(std::size_t sort) const {
    std::vector<Config> out;
    for (const auto& [c, es] : fibers_)
        if (c.size() == sort) out.push_back(c);
    return out;
}

const std::vector<ElemId>& Polygroupoid::fillers(const Tuple& t, std::size_t slot) const {
    static const std::vector<ElemId> none;
    Tuple key = t;
    key[slot] = kNoElem;
    auto it = horns_.find(key);
    return it == horns_.end() ? none : it->second;
}

std::optional<ElemId> Polygroupoid::unique_filler(const Tuple& t, std::size_t slot) const {
    const auto& f = fillers(t, slot);
    if (f.size() != 1) return std::nullopt;
    return f[0];
}

std::optional<Config> Polygroupoid::tuple_config(const Tuple& t) const {
    std::set<Vertex> u;
    for (ElemId e : t) {
        if (elements_[e].sort + 1 != t.size()) return std::nullopt;
        u.insert(elements_[e].config.begin(), elements_[e].config.end());
    }
    Config c(u.begin(), u.end());
    if (c.size() != t.size()) return std::nullopt;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (elements_[t[i]].config != drop_vertex(c, i)) return std::nullopt;
    return c;
}

std::vector<std::string> Polygroupoid::ids(const Tuple& t) const {
    std::vector<std::string> out;
    out.reserve(t.size());
    for (ElemId e : t) out.push_back(elements_[e].id);
    return out;
}

Tuple Polygroupoid::lookup(const std::vector<std::string>& ids) const {
    Tuple t;
    for (const auto& id : ids) t.push_back(at(id));
    return t;
}

// ---------------------------------------------------------------- json

json polygroupoid_to_json(const Polygroupoid& H) {
    const PolygroupoidData d = H.data();
    json fibers = json::object(), pi = json::object(), q = json::array();
    for (const auto& [c, ids] : d.fibers) fibers[config_key(c)] = ids;
    for (const auto& [id, refs] : d.pi) pi[id] = refs;
    for (const auto& t : d.q) q.push_back(t);
    return {{"arity", d.arity}, {"vertices", d.vertices}, {"fibers", fibers}, {"pi", pi}, {"Q", q}};
}

Polygroupoid polygroupoid_from_json(const json& j) {
    try {
        PolygroupoidData d;
        d.arity = j.at("arity").get<std::size_t>();
        d.vertices = j.at("vertices").get<std::vector<Vertex>>();
        for (const auto& [key, ids] : j.at("fibers").items())
            d.fibers[parse_config_key(key)] = ids.get<std::vector<std::string>>();
        if (j.contains("pi"))
            for (const auto& [id, refs] : j.at("pi").items()) d.pi[id] = refs.get<std::vector<std::string>>();
        for (const auto& t : j.at("Q")) d.q.push_back(t.get<std::vector<std::string>>());
        return Polygroupoid(d);
    } catch (const json::exception& e) {
        throw FormatError(std::string("polygroupoid JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------- compatibility

bool pair_compatible(const Polygroupoid& H, ElemId wa, std::size_t a, ElemId wb, std::size_t b) {
    const auto& A = H.element(wa);
    if (A.sort == 1) return wa != wb;
    // 1-based i = a+1 < j = b+1: pi_i(w_j) = pi_{j-1}(w_i)
    return H.element(wb).pi[a] == A.pi[b - 1];
}

std::optional<std::pair<std::size_t, std::size_t>> compatibility_witness(const Polygroupoid& H, const Tuple& t) {
    if (t.empty()) throw std::invalid_argument("empty tuple");
    const std::size_t k = H.element(t[0]).sort;
    for (ElemId e : t)
        if (H.element(e).sort != k) throw std::invalid_argument("tuple mixes sorts");
    if (t.size() != k + 1) throw std::invalid_argument("a sort-k tuple must have k+1 entries");
    for (std::size_t b = 1; b < t.size(); ++b)
        for (std::size_t a = 0; a < b; ++a)
            if (!pair_compatible(H, t[a], a, t[b], b)) return std::make_pair(a + 1, b + 1);
    return std::nullopt;
}

bool is_compatible(const Polygroupoid& H, const Tuple& t) { return !compatibility_witness(H, t).has_value(); }

bool is_partially_compatible(const Polygroupoid& H, const Tuple& t, std::size_t skip) {
    for (std::size_t b = 1; b < t.size(); ++b)
        for (std::size_t a = 0; a < b; ++a)
            if (a != skip && b != skip && !pair_compatible(H, t[a], a, t[b], b)) return false;
    return true;
}

// ---------------------------------------------------------------- axioms

namespace {

std::optional<std::string> coherence_defect(const Polygroupoid& H, ElemId e) {
    const auto& el = H.element(e);
    if (el.sort < 2) return std::nullopt;
    for (std::size_t j = 0; j < el.pi.size(); ++j)
        if (H.element(el.pi[j]).config != drop_vertex(el.config, j))
            return "pi_" + std::to_string(j + 1) + " is over " + config_key(H.element(el.pi[j]).config) +
                   ", expected " + config_key(drop_vertex(el.config, j));
    if (auto w = compatibility_witness(H, el.pi))
        return "pi tuple not compatible at (" + std::to_string(w->first) + "," + std::to_string(w->second) + ")";
    return std::nullopt;
}

std::optional<std::string> q_defect(const Polygroupoid& H, const Tuple& t) {
    if (auto w = compatibility_witness(H, t))
        return "not compatible at (" + std::to_string(w->first) + "," + std::to_string(w->second) + ")";
    if (!H.tuple_config(t)) return "entries are not the faces of one configuration";
    return std::nullopt;
}

}  // namespace

AxiomReport check_axioms(const Polygroupoid& H) {
    AxiomReport r;

    std::size_t checked = 0;
    bool ok = true;
    for (ElemId e = 0; e < H.size() && ok; ++e) {
        if (H.element(e).sort < 2) continue;
        ++checked;
        if (auto d = coherence_defect(H, e)) {
            r.fail("coherence", "element " + H.id(e) + ": " + *d,
                   {{"element", H.id(e)}, {"pi", H.ids(H.element(e).pi)}});
            ok = false;
        }
    }
    if (ok) r.pass("coherence", std::to_string(checked) + " projection tuples");

    ok = true;
    for (const auto& t : H.q()) {
        if (auto d = q_defect(H, t)) {
            r.fail("q-compatibility", "Q tuple " + json(H.ids(t)).dump() + " " + *d, {{"tuple", H.ids(t)}});
            ok = false;
            break;
        }
    }
    if (ok) r.pass("q-compatibility", std::to_string(H.q().size()) + " Q tuples");

    ok = true;
    for (const auto& t : H.q()) {
        for (std::size_t s = 0; s < t.size() && ok; ++s) {
            const auto& f = H.fillers(t, s);
            if (f.size() > 1) {
                Tuple a = t, b = t;
                a[s] = f[0];
                b[s] = f[1];
                r.fail("horn-uniqueness",
                       "slot " + std::to_string(s + 1) + " has " + std::to_string(f.size()) + " fillers",
                       {{"slot", s + 1}, {"tuples", json::array({H.ids(a), H.ids(b)})}});
                ok = false;
            }
        }
        if (!ok) break;
    }
    if (ok) r.pass("horn-uniqueness", "every Q tuple is the unique filler of its horns");

    std::size_t largest = 0;
    for (const auto& [c, es] : H.fibers()) largest = std::max(largest, es.size());
    r.pass("local-finiteness", std::to_string(H.fibers().size()) + " fibers, largest has " + std::to_string(largest) +
                                   " elements");
    return r;
}

namespace {

struct Grid {
    std::size_t n;
    std::size_t rows;                                    // n + 2
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // lexicographic, 0-based
    std::vector<std::vector<std::size_t>> row_pairs;     // row i, slot j -> pair index
    std::vector<std::size_t> row_last;                   // largest pair index in the row

    explicit Grid(std::size_t arity) : n(arity), rows(arity + 2) {
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
        for (std::size_t p = 0; p < rows; ++p)
            for (std::size_t q = p + 1; q < rows; ++q) {
                index[{p, q}] = pairs.size();
                pairs.emplace_back(p, q);
            }
        row_pairs.assign(rows, {});
        row_last.assign(rows, 0);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j <= n; ++j) {
                const std::size_t other = j < i ? j : j + 1;
                const std::size_t idx = index.at({std::min(i, other), std::max(i, other)});
                row_pairs[i].push_back(idx);
                row_last[i] = std::max(row_last[i], idx);
            }
    }

    static std::string pair_key(std::pair<std::size_t, std::size_t> p) {
        return std::to_string(p.first + 1) + "," + std::to_string(p.second + 1);
    }
};

class AssociativitySearch {
  public:
    AssociativitySearch(const Polygroupoid& H, const Config& c) : H_(H), c_(c), grid_(H.arity()) {
        for (const auto& [p, q] : grid_.pairs) {
            Config sub;
            for (std::size_t k = 0; k < c.size(); ++k)
                if (k != p && k != q) sub.push_back(c[k]);
            domains_.push_back(&H.fiber(sub));
            if (domains_.back()->empty()) throw std::invalid_argument("empty fiber over " + config_key(sub));
        }
        // rows touching each pair, with the slot the pair occupies
        touching_.resize(grid_.pairs.size());
        for (std::size_t i = 0; i < grid_.rows; ++i)
            for (std::size_t j = 0; j <= grid_.n; ++j) touching_[grid_.row_pairs[i][j]].emplace_back(i, j);
        value_.assign(grid_.pairs.size(), kNoElem);
    }

    std::optional<json> run() {
        dfs(0, 0, grid_.rows);
        return violation_;
    }

    std::size_t leaves() const { return leaves_; }

  private:
    Tuple row_tuple(std::size_t i) const {
        Tuple t;
        for (std::size_t idx : grid_.row_pairs[i]) t.push_back(value_[idx]);
        return t;
    }

    bool compatible_with_assigned(std::size_t idx, ElemId x) const {
        for (auto [i, j] : touching_[idx])
            for (std::size_t s = 0; s <= grid_.n; ++s) {
                const std::size_t other = grid_.row_pairs[i][s];
                if (s == j || other >= idx) continue;
                const bool ok = s < j ? pair_compatible(H_, value_[other], s, x, j)
                                      : pair_compatible(H_, x, j, value_[other], s);
                if (!ok) return false;
            }
        return true;
    }

    void dfs(std::size_t idx, std::size_t failures, std::size_t failed_row) {
        if (violation_) return;
        if (idx == grid_.pairs.size()) {
            ++leaves_;
            if (failures == 1) record(failed_row);
            return;
        }
        std::vector<ElemId> forced;
        bool is_forced = false;
        if (failures == 1) {
            for (auto [i, j] : touching_[idx]) {
                if (grid_.row_last[i] != idx) continue;
                Tuple t = row_tuple(i);
                auto f = H_.unique_filler(t, j);
                if (!f) return;
                if (is_forced && forced[0] != *f) return;
                forced = {*f};
                is_forced = true;
            }
        }
        const std::vector<ElemId>& candidates = is_forced ? forced : *domains_[idx];
        for (ElemId x : candidates) {
            if (is_forced && std::find(domains_[idx]->begin(), domains_[idx]->end(), x) == domains_[idx]->end())
                continue;
            if (!compatible_with_assigned(idx, x)) continue;
            value_[idx] = x;
            std::size_t f = failures, row = failed_row;
            for (auto [i, j] : touching_[idx]) {
                if (grid_.row_last[i] != idx) continue;
                if (!H_.has_q(row_tuple(i))) {
                    ++f;
                    row = i;
                }
            }
            if (f < 2) dfs(idx + 1, f, row);
            value_[idx] = kNoElem;
            if (violation_) return;
        }
    }

    void record(std::size_t row) {
        json grid = json::object();
        for (std::size_t k = 0; k < grid_.pairs.size(); ++k) grid[Grid::pair_key(grid_.pairs[k])] = H_.id(value_[k]);
        violation_ = json{{"config", c_}, {"row", row + 1}, {"grid", grid}};
    }

    const Polygroupoid& H_;
    Config c_;
    Grid grid_;
    std::vector<const std::vector<ElemId>*> domains_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> touching_;
    std::vector<ElemId> value_;
    std::optional<json> violation_;
    std::size_t leaves_ = 0;
};

void validate_config(const Polygroupoid& H, const Config& c, std::size_t size) {
    if (c.size() != size) throw std::invalid_argument("configuration must have " + std::to_string(size) + " vertices");
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!std::binary_search(H.vertices().begin(), H.vertices().end(), c[i]))
            throw std::invalid_argument("unknown vertex " + std::to_string(c[i]));
        if (i > 0 && c[i - 1] >= c[i]) throw std::invalid_argument("configuration vertices must be increasing");
    }
}

}  // namespace

AxiomReport check_associativity(const Polygroupoid& H, const Config& c) {
    validate_config(H, c, H.arity() + 2);
    AssociativitySearch search(H, c);
    AxiomReport r;
    if (auto v = search.run()) {
        r.fail("associativity",
               "on " + config_key(c) + ": every row but " + std::to_string((*v)["row"].get<std::size_t>()) +
                   " is in Q",
               *v);
    } else {
        r.pass("associativity", "on " + config_key(c) + ": " + std::to_string(search.leaves()) + " grids explored");
    }
    return r;
}

AxiomReport check_associativity(const Polygroupoid& H) {
    AxiomReport r;
    std::size_t configs = 0, leaves = 0;
    for (const auto& c : subsets(H.vertices(), H.arity() + 2)) {
        AssociativitySearch search(H, c);
        ++configs;
        if (auto v = search.run()) {
            r.fail("associativity",
                   "on " + config_key(c) + ": every row but " + std::to_string((*v)["row"].get<std::size_t>()) +
                       " is in Q",
                   *v);
            return r;
        }
        leaves += search.leaves();
    }
    r.pass("associativity",
           std::to_string(configs) + " configurations, " + std::to_string(leaves) + " grids explored");
    return r;
}

bool counterexample_refails(const Polygroupoid& H, const Check& failed) {
    const json& cx = failed.counterexample;
    try {
        if (failed.name == "coherence") {
            ElemId e = H.at(cx.at("element").get<std::string>());
            if (H.ids(H.element(e).pi) != cx.at("pi").get<std::vector<std::string>>()) return false;
            return coherence_defect(H, e).has_value();
        }
        if (failed.name == "q-compatibility") {
            Tuple t = H.lookup(cx.at("tuple").get<std::vector<std::string>>());
            return H.has_q(t) && q_defect(H, t).has_value();
        }
        if (failed.name == "horn-uniqueness") {
            const std::size_t slot = cx.at("slot").get<std::size_t>() - 1;
            Tuple a = H.lookup(cx.at("tuples")[0].get<std::vector<std::string>>());
            Tuple b = H.lookup(cx.at("tuples")[1].get<std::vector<std::string>>());
            if (!H.has_q(a) || !H.has_q(b) || a[slot] == b[slot]) return false;
            for (std::size_t s = 0; s < a.size(); ++s)
                if (s != slot && a[s] != b[s]) return false;
            return true;
        }
        if (failed.name == "associativity") {
            const Config c = cx.at("config").get<Config>();
            const std::size_t row = cx.at("row").get<std::size_t>() - 1;
            Grid grid(H.arity());
            if (c.size() != grid.rows || row >= grid.rows) return false;
            std::vector<ElemId> value;
            for (const auto& p : grid.pairs) {
                ElemId e = H.at(cx.at("grid").at(Grid::pair_key(p)).get<std::string>());
                Config sub;
                for (std::size_t k = 0; k < c.size(); ++k)
                    if (k != p.first && k != p.second) sub.push_back(c[k]);
                if (H.element(e).config != sub) return false;
                value.push_back(e);
            }
            for (std::size_t i = 0; i < grid.rows; ++i) {
                Tuple t;
                for (std::size_t idx : grid.row_pairs[i]) t.push_back(value[idx]);
                if (!is_compatible(H, t)) return false;
                if (H.has_q(t) == (i == row)) return false;
            }
            return true;
        }
    } catch (const std::exception&) {
        return false;
    }
    return false;
}

// ---------------------------------------------------------------- horns

void for_each_horn(const Polygroupoid& H, const Config& c, std::size_t open,
                   const std::function<void(const Tuple&)>& visit) {
    const std::size_t slots = c.size();
    std::vector<const std::vector<ElemId>*> dom(slots);
    for (std::size_t i = 0; i < slots; ++i) dom[i] = &H.fiber(drop_vertex(c, i));
    Tuple t(slots, kNoElem);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == slots) {
            visit(t);
            return;
        }
        if (i == open) {
            rec(i + 1);
            return;
        }
        for (ElemId x : *dom[i]) {
            bool ok = true;
            for (std::size_t a = 0; a < i && ok; ++a)
                if (a != open) ok = pair_compatible(H, t[a], a, x, i);
            if (!ok) continue;
            t[i] = x;
            rec(i + 1);
        }
        t[i] = kNoElem;
    };
    rec(0);
}

HornCount count_horn_fillers(const Polygroupoid& H) {
    HornCount out;
    for (const auto& c : subsets(H.vertices(), H.arity() + 1))
        for (std::size_t open = 0; open < c.size(); ++open)
            for_each_horn(H, c, open, [&](const Tuple& t) {
                ++out.horns;
                const std::size_t k = H.fillers(t, open).size();
                if (k == 1) {
                    ++out.exactly_one;
                } else if (!out.first_bad) {
                    json ids = json::array();
                    for (ElemId e : t) ids.push_back(e == kNoElem ? json(nullptr) : json(H.id(e)));
                    out.first_bad = json{{"horn", ids}, {"slot", open + 1}, {"fillers", k}};
                }
            });
    return out;
}

// ---------------------------------------------------------------- standard model

namespace {

std::string padded(std::size_t value, std::size_t count) {
    std::size_t width = 1;
    for (std::size_t m = count > 0 ? count - 1 : 0; m >= 10; m /= 10) ++width;
    std::string s = std::to_string(value);
    return std::string(width > s.size() ? width - s.size() : 0, '0') + s;
}

}  // namespace

std::string standard_id(const FinAbelianGroup& G, const Config& c, const GroupElement& g) {
    return config_key(c) + "/" + padded(G.index_of(g), G.order());
}

Polygroupoid standard(const FinAbelianGroup& G, const std::vector<Vertex>& vertices, std::size_t n) {
    return twisted_standard(G, vertices, n, {});
}

Polygroupoid twisted_standard(const FinAbelianGroup& G, const std::vector<Vertex>& vertices, std::size_t n,
                              const std::map<Config, GroupElement>& defect) {
    if (!G.is_finite()) throw std::invalid_argument("standard model needs a finite group");
    if (n < 2) throw std::invalid_argument("arity must be at least 2");
    Config I = vertices;
    std::sort(I.begin(), I.end());
    if (I.size() < n + 1) throw std::invalid_argument("standard model needs at least n+1 vertices");

    PolygroupoidData d;
    d.arity = n;
    d.vertices = I;
    const std::size_t order = G.order();
    auto lower_id = [](const Config& c) { return config_key(c) + "/0"; };
    for (std::size_t k = 1; k <= n; ++k)
        for (const auto& c : subsets(I, k)) {
            std::vector<std::string> pi;
            for (std::size_t j = 0; k >= 2 && j < k; ++j) pi.push_back(lower_id(drop_vertex(c, j)));
            if (k < n) {
                d.fibers[c] = {lower_id(c)};
                if (k >= 2) d.pi[lower_id(c)] = pi;
            } else {
                auto& ids = d.fibers[c];
                for (std::size_t g = 0; g < order; ++g) {
                    ids.push_back(config_key(c) + "/" + padded(g, order));
                    d.pi[ids.back()] = pi;
                }
            }
        }

    // Q over each (n+1)-configuration: sum_{i=1}^{n+1} (-1)^i g_i = defect(c)
    const auto elements = G.elements();
    for (const auto& c : subsets(I, n + 1)) {
        auto dit = defect.find(c);
        const GroupElement base = dit == defect.end() ? G.zero() : G.negate(dit->second);
        std::vector<std::string> prefix(n);
        for (std::size_t i = 0; i < n; ++i) prefix[i] = config_key(drop_vertex(c, i));
        const std::string last = config_key(drop_vertex(c, n));
        std::vector<std::size_t> idx(n, 0);
        for (;;) {
            GroupElement s = base;
            for (std::size_t i = 0; i < n; ++i) {
                const GroupElement& g = elements[idx[i]];
                s = (i % 2 == 0) ? G.sub(s, g) : G.add(s, g);  // slot i+1 has sign (-1)^(i+1)
            }
            // (-1)^(n+1) g_{n+1} + s = 0
            const GroupElement last_g = (n % 2 == 0) ? s : G.negate(s);
            std::vector<std::string> t;
            for (std::size_t i = 0; i < n; ++i) t.push_back(prefix[i] + "/" + padded(idx[i], order));
            t.push_back(last + "/" + padded(G.index_of(last_g), order));
            d.q.push_back(std::move(t));

            std::size_t i = 0;
            while (i < n && ++idx[i] == order) idx[i++] = 0;
            if (i == n) break;
        }
    }
    return Polygroupoid(d);
}

Polygroupoid standard(const FinAbelianGroup& G, std::size_t vertex_count, std::size_t n) {
    std::vector<Vertex> I(vertex_count);
    std::iota(I.begin(), I.end(), 0);
    return standard(G, I, n);
}

// ---------------------------------------------------------------- scrambling

Polygroupoid scramble(const Polygroupoid& H, std::uint64_t seed) {
    PolygroupoidData d = H.data();
    Rng rng(seed);
    std::map<std::string, std::string> beta;
    for (const auto& [c, ids] : d.fibers) {
        if (c.size() != d.arity) continue;
        std::vector<std::string> perm = ids;
        rng.shuffle(perm);
        for (std::size_t k = 0; k < ids.size(); ++k) beta[ids[k]] = perm[k];
    }
    for (auto& t : d.q)
        for (auto& id : t) id = beta.at(id);
    std::map<std::string, std::vector<std::string>> pi;
    for (auto& [id, refs] : d.pi) {
        auto it = beta.find(id);
        pi[it == beta.end() ? id : it->second] = refs;
    }
    d.pi = std::move(pi);
    return Polygroupoid(d);
}

// ---------------------------------------------------------------- induced maps

namespace {

Config apply_perm(const VertexPerm& sigma, const Config& a) {
    Config b;
    for (Vertex v : a) b.push_back(sigma.at(v));
    std::sort(b.begin(), b.end());
    return b;
}

// position in sigma(a) of sigma(a_j), for each j
std::vector<std::size_t> slot_map(const VertexPerm& sigma, const Config& a) {
    const Config b = apply_perm(sigma, a);
    std::vector<std::size_t> pos(a.size());
    for (std::size_t j = 0; j < a.size(); ++j)
        pos[j] = static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), sigma.at(a[j])) - b.begin());
    return pos;
}

void validate_perm(const Polygroupoid& H, const VertexPerm& sigma) {
    std::set<Vertex> image;
    for (Vertex v : H.vertices()) {
        auto it = sigma.find(v);
        if (it == sigma.end()) throw std::invalid_argument("permutation misses vertex " + std::to_string(v));
        image.insert(it->second);
    }
    if (sigma.size() != H.vertices().size() || image != std::set<Vertex>(H.vertices().begin(), H.vertices().end()))
        throw std::invalid_argument("not a permutation of the vertex set");
}

Tuple image_tuple(const Polygroupoid& H, const VertexPerm& sigma, const std::vector<ElemId>& image, const Tuple& t) {
    const Config c = *H.tuple_config(t);
    const auto pos = slot_map(sigma, c);
    Tuple out(t.size(), kNoElem);
    for (std::size_t i = 0; i < t.size(); ++i) out[pos[i]] = image[t[i]];
    return out;
}

class CoverSearch {
  public:
    CoverSearch(const Polygroupoid& H, const VertexPerm& sigma) : H_(H), sigma_(sigma) {
        image_.assign(H.size(), kNoElem);
        used_.assign(H.size(), false);
        q_of_.assign(H.size(), {});
        for (std::size_t k = 0; k < H.q().size(); ++k) {
            const Tuple& t = H.q()[k];
            auto c = H.tuple_config(t);
            if (!c) throw std::invalid_argument("Q tuple not over a configuration; run check_axioms first");
            q_pos_.push_back(slot_map(sigma, *c));
            for (ElemId e : t) q_of_[e].push_back(k);
        }
        for (std::size_t sort = 2; sort <= H.arity(); ++sort)
            for (const auto& c : H.configs(sort))
                for (ElemId e : H.fiber(c)) order_.push_back(e);
    }

    InducedMap run() {
        InducedMap out;
        for (const auto& [a, es] : H_.fibers())
            if (H_.fiber(apply_perm(sigma_, a)).size() != es.size()) {
                out.obstruction = config_key(a);
                return out;
            }
        std::map<Config, std::size_t> counts;
        for (const auto& t : H_.q()) ++counts[*H_.tuple_config(t)];
        for (const auto& [c, k] : counts) {
            auto it = counts.find(apply_perm(sigma_, c));
            if (it == counts.end() || it->second != k) {
                out.obstruction = config_key(c);
                return out;
            }
        }
        for (const auto& c : H_.configs(1)) {
            ElemId e = H_.fiber(c)[0];
            image_[e] = H_.fiber(apply_perm(sigma_, c))[0];
        }
        if (search(0)) {
            out.image = image_;
        } else {
            out.obstruction = config_key(H_.element(order_[frontier_]).config);
        }
        return out;
    }

  private:
    bool pi_ok(ElemId w, ElemId x) const {
        const auto& el = H_.element(w);
        const auto pos = slot_map(sigma_, el.config);
        for (std::size_t j = 0; j < el.pi.size(); ++j)
            if (H_.element(x).pi[pos[j]] != image_[el.pi[j]]) return false;
        return true;
    }

    bool assign(ElemId w, ElemId x) {
        if (used_[x] || !pi_ok(w, x)) return false;
        image_[w] = x;
        used_[x] = true;
        trail_.push_back(w);
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            used_[image_[trail_.back()]] = false;
            image_[trail_.back()] = kNoElem;
            trail_.pop_back();
        }
    }

    bool propagate(std::size_t from) {
        for (std::size_t k = from; k < trail_.size(); ++k) {
            const ElemId w = trail_[k];
            for (std::size_t qi : q_of_[w]) {
                const Tuple& t = H_.q()[qi];
                const auto& pos = q_pos_[qi];
                Tuple img(t.size(), kNoElem);
                std::size_t open = t.size(), missing = 0;
                for (std::size_t i = 0; i < t.size(); ++i) {
                    img[pos[i]] = image_[t[i]];
                    if (image_[t[i]] == kNoElem) {
                        ++missing;
                        open = i;
                    }
                }
                if (missing == 0) {
                    if (!H_.has_q(img)) return false;
                } else if (missing == 1) {
                    auto f = H_.unique_filler(img, pos[open]);
                    if (!f || !assign(t[open], *f)) return false;
                }
            }
        }
        return true;
    }

    bool search(std::size_t k) {
        while (k < order_.size() && image_[order_[k]] != kNoElem) ++k;
        if (k == order_.size()) return true;
        frontier_ = std::max(frontier_, k);
        const ElemId w = order_[k];
        for (ElemId x : H_.fiber(apply_perm(sigma_, H_.element(w).config))) {
            const std::size_t mark = trail_.size();
            if (assign(w, x) && propagate(mark) && search(k + 1)) return true;
            undo(mark);
        }
        return false;
    }

    const Polygroupoid& H_;
    const VertexPerm& sigma_;
    std::vector<ElemId> image_;
    std::vector<bool> used_;
    std::vector<std::vector<std::size_t>> q_of_;
    std::vector<std::vector<std::size_t>> q_pos_;
    std::vector<ElemId> order_;
    std::vector<ElemId> trail_;
    std::size_t frontier_ = 0;
};

std::optional<std::string> cover_defect(const Polygroupoid& H, const VertexPerm& sigma, const std::vector<ElemId>& f) {
    std::vector<bool> hit(H.size(), false);
    for (ElemId w = 0; w < H.size(); ++w) {
        const auto& el = H.element(w);
        if (f[w] >= H.size() || H.element(f[w]).config != apply_perm(sigma, el.config))
            return "element " + el.id + " is not sent over the permuted configuration";
        if (hit[f[w]]) return "two elements share the image " + H.id(f[w]);
        hit[f[w]] = true;
        const auto pos = slot_map(sigma, el.config);
        for (std::size_t j = 0; j < el.pi.size(); ++j)
            if (H.element(f[w]).pi[pos[j]] != f[el.pi[j]]) return "projection of " + el.id + " not preserved";
    }
    for (const auto& t : H.q())
        if (!H.has_q(image_tuple(H, sigma, f, t))) return "Q tuple " + json(H.ids(t)).dump() + " leaves Q";
    return std::nullopt;
}

json perm_json(const VertexPerm& sigma) {
    json j = json::object();
    for (const auto& [a, b] : sigma) j[std::to_string(a)] = b;
    return j;
}

}  // namespace

InducedMap induced_automorphism(const Polygroupoid& H, const VertexPerm& sigma) {
    validate_perm(H, sigma);
    return CoverSearch(H, sigma).run();
}

AxiomReport check_symmetric_system(const Polygroupoid& H, const std::vector<VertexPerm>& generators) {
    AxiomReport r;
    VertexPerm id;
    for (Vertex v : H.vertices()) id[v] = v;
    std::vector<VertexPerm> group{id};
    std::set<VertexPerm> seen{id};
    for (std::size_t k = 0; k < group.size(); ++k)
        for (const auto& g : generators) {
            validate_perm(H, g);
            VertexPerm h;
            for (const auto& [v, w] : group[k]) h[v] = g.at(w);
            if (seen.insert(h).second) group.push_back(h);
            if (group.size() > 5040) throw std::invalid_argument("generated permutation group too large");
        }

    std::map<VertexPerm, std::vector<ElemId>> maps;
    for (const auto& s : group) {
        InducedMap m = induced_automorphism(H, s);
        if (!m.image) {
            r.fail("existence", "no cover over fiber " + m.obstruction,
                   {{"sigma", perm_json(s)}, {"fiber", m.obstruction}});
            return r;
        }
        if (auto d = cover_defect(H, s, *m.image)) {
            r.fail("cover-validity", *d, {{"sigma", perm_json(s)}});
            return r;
        }
        maps.emplace(s, std::move(*m.image));
    }
    r.pass("existence", std::to_string(group.size()) + " permutations covered");
    r.pass("cover-validity", "projections and Q preserved");

    std::size_t top_total = 0, top_agree = 0;
    for (const auto& s : group)
        for (const auto& t : group) {
            VertexPerm st;
            for (const auto& [v, w] : t) st[v] = s.at(w);
            const auto& fs = maps.at(s);
            const auto& ft = maps.at(t);
            const auto& fst = maps.at(st);
            for (ElemId w = 0; w < H.size(); ++w) {
                const bool agree = fs[ft[w]] == fst[w];
                if (H.element(w).sort < H.arity()) {
                    if (!agree) {
                        r.fail("composition-coherence", "element " + H.id(w) + " breaks [s][t] = [st]",
                               {{"sigma", perm_json(s)}, {"tau", perm_json(t)}, {"element", H.id(w)}});
                        return r;
                    }
                } else {
                    ++top_total;
                    top_agree += agree ? 1 : 0;
                }
            }
        }
    r.pass("composition-coherence", "exact below the top sort; top sort agrees on " + std::to_string(top_agree) +
                                        " of " + std::to_string(top_total) + " composites");
    return r;
}

}  // namespace polyhom
