#include "polyhom/chain.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace polyhom {

std::string to_string(const SimplexGen& g) {
    std::string s = "{";
    for (std::size_t i = 0; i < g.support.size(); ++i) s += (i ? "," : "") + std::to_string(g.support[i]);
    s += "}";
    if (!g.label.empty()) s += ":" + g.label;
    return s;
}

namespace {

Support drop(const Support& s, std::size_t i) {
    Support out = s;
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
    return out;
}

void subsets_of_size(const Support& from, std::size_t k, std::size_t start, Support& cur, std::vector<Support>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < from.size(); ++i) {
        cur.push_back(from[i]);
        subsets_of_size(from, k, i + 1, cur, out);
        cur.pop_back();
    }
}

std::vector<Support> subsets_of_size(const Support& from, std::size_t k) {
    std::vector<Support> out;
    Support cur;
    subsets_of_size(from, k, 0, cur, out);
    return out;
}

}  // namespace

SimplexFamily::SimplexFamily(std::vector<SimplexGen> generators, const FaceFn& face) {
    std::sort(generators.begin(), generators.end());
    if (std::adjacent_find(generators.begin(), generators.end()) != generators.end())
        throw std::invalid_argument("duplicate generator in family");
    std::set<SimplexGen> all(generators.begin(), generators.end());
    for (const auto& g : generators) {
        if (g.support.empty()) throw std::invalid_argument("generator with empty support");
        if (!std::is_sorted(g.support.begin(), g.support.end()) ||
            std::adjacent_find(g.support.begin(), g.support.end()) != g.support.end())
            throw std::invalid_argument("support not strictly increasing: " + to_string(g));
        if (by_dim_.size() <= g.dim()) by_dim_.resize(g.dim() + 1);
        index_[g] = by_dim_[g.dim()].size();
        by_dim_[g.dim()].push_back(g);
    }
    for (const auto& g : generators) {
        if (g.dim() == 0) continue;
        std::vector<SimplexGen> fs;
        for (std::size_t i = 0; i <= g.dim(); ++i) {
            SimplexGen f = face(g, i);
            if (f.support != drop(g.support, i))
                throw std::invalid_argument("face " + std::to_string(i) + " of " + to_string(g) + " has support " +
                                            to_string(f));
            if (!all.count(f))
                throw std::invalid_argument("face " + std::to_string(i) + " of " + to_string(g) +
                                            " is not in the family");
            fs.push_back(std::move(f));
        }
        faces_.emplace(g, std::move(fs));
    }
    for (const auto& g : generators) {
        if (g.dim() < 2) continue;
        const auto& fs = faces_.at(g);
        for (std::size_t j = 1; j <= g.dim(); ++j)
            for (std::size_t i = 0; i < j; ++i)
                if (faces_.at(fs[j])[i] != faces_.at(fs[i])[j - 1])
                    throw std::invalid_argument("simplicial identity fails on " + to_string(g) + " at (" +
                                                std::to_string(i) + "," + std::to_string(j) + ")");
    }
}

SimplexFamily SimplexFamily::from_supports(const std::vector<Support>& supports) {
    std::set<Support> closed;
    std::vector<Support> todo = supports;
    while (!todo.empty()) {
        Support s = std::move(todo.back());
        todo.pop_back();
        if (s.empty() || !closed.insert(s).second) continue;
        for (std::size_t i = 0; s.size() > 1 && i < s.size(); ++i) todo.push_back(drop(s, i));
    }
    std::vector<SimplexGen> gens;
    for (const auto& s : closed) gens.push_back({s, ""});
    return SimplexFamily(std::move(gens), [](const SimplexGen& g, std::size_t i) {
        return SimplexGen{drop(g.support, i), ""};
    });
}

SimplexFamily SimplexFamily::colorings(std::uint32_t vertices, std::size_t max_dim, std::uint32_t values,
                                       std::size_t arity) {
    if (values == 0 || values > 10) throw std::invalid_argument("colorings need 1..10 values");
    Support all(vertices);
    for (std::uint32_t v = 0; v < vertices; ++v) all[v] = v;

    std::vector<SimplexGen> gens;
    for (std::size_t k = 1; k <= std::min<std::size_t>(max_dim + 1, vertices); ++k)
        for (const auto& s : subsets_of_size(all, k)) {
            const std::size_t slots = k < arity ? 0 : subsets_of_size(s, arity).size();
            std::size_t total = 1;
            for (std::size_t i = 0; i < slots; ++i) total *= values;
            for (std::size_t code = 0; code < total; ++code) {
                std::string label(slots, '0');
                std::size_t c = code;
                for (std::size_t i = 0; i < slots; ++i, c /= values) label[i] = static_cast<char>('0' + c % values);
                gens.push_back({s, label});
            }
        }

    return SimplexFamily(std::move(gens), [arity](const SimplexGen& g, std::size_t i) {
        SimplexGen f{drop(g.support, i), ""};
        if (g.label.empty()) return f;
        const auto parent = subsets_of_size(g.support, arity);
        for (const auto& sub : subsets_of_size(f.support, arity)) {
            auto pos = std::find(parent.begin(), parent.end(), sub) - parent.begin();
            f.label += g.label[static_cast<std::size_t>(pos)];
        }
        return f;
    });
}

const std::vector<SimplexGen>& SimplexFamily::generators(std::size_t d) const {
    static const std::vector<SimplexGen> none;
    return d < by_dim_.size() ? by_dim_[d] : none;
}

bool SimplexFamily::contains(const SimplexGen& g) const { return index_.count(g) > 0; }

std::size_t SimplexFamily::index_of(const SimplexGen& g) const {
    auto it = index_.find(g);
    if (it == index_.end()) throw std::invalid_argument("generator not in family: " + to_string(g));
    return it->second;
}

const SimplexGen& SimplexFamily::face(const SimplexGen& g, std::size_t i) const {
    auto it = faces_.find(g);
    if (it == faces_.end()) throw std::invalid_argument("no faces for generator " + to_string(g));
    if (i >= it->second.size()) throw std::out_of_range("face index " + std::to_string(i) + " out of range");
    return it->second[i];
}

// ---------------------------------------------------------------- chains

Chain Chain::of(const SimplexGen& g, std::int64_t coef) {
    Chain c(g.dim());
    c.add(g, coef);
    return c;
}

std::int64_t Chain::coef(const SimplexGen& g) const {
    auto it = terms_.find(g);
    return it == terms_.end() ? 0 : it->second;
}

void Chain::add(const SimplexGen& g, std::int64_t coef) {
    if (g.dim() != dim_) throw std::invalid_argument("generator " + to_string(g) + " has the wrong dimension");
    if (coef == 0) return;
    auto [it, inserted] = terms_.emplace(g, coef);
    if (!inserted) {
        it->second += coef;
        if (it->second == 0) terms_.erase(it);
    }
}

Support Chain::support() const {
    std::set<std::uint32_t> s;
    for (const auto& [g, k] : terms_) s.insert(g.support.begin(), g.support.end());
    return {s.begin(), s.end()};
}

Chain& Chain::operator+=(const Chain& o) {
    if (o.dim_ != dim_ && !o.is_zero()) throw std::invalid_argument("adding chains of different dimension");
    for (const auto& [g, k] : o.terms_) add(g, k);
    return *this;
}

Chain& Chain::operator-=(const Chain& o) {
    if (o.dim_ != dim_ && !o.is_zero()) throw std::invalid_argument("subtracting chains of different dimension");
    for (const auto& [g, k] : o.terms_) add(g, -k);
    return *this;
}

Chain operator*(std::int64_t k, const Chain& c) {
    Chain out(c.dim_);
    for (const auto& [g, x] : c.terms_) out.add(g, k * x);
    return out;
}

Chain face_op(const SimplexFamily& fam, const Chain& c, std::size_t i) {
    if (c.dim() == 0 || i > c.dim())
        throw std::out_of_range("face index " + std::to_string(i) + " out of range for dimension " +
                                std::to_string(c.dim()));
    Chain out(c.dim() - 1);
    for (const auto& [g, k] : c.terms()) out.add(fam.face(g, i), k);
    return out;
}

Chain boundary(const SimplexFamily& fam, const Chain& c) {
    if (c.dim() == 0) throw std::invalid_argument("boundary of a 0-chain");
    Chain out(c.dim() - 1);
    for (std::size_t i = 0; i <= c.dim(); ++i) {
        const std::int64_t sign = i % 2 == 0 ? 1 : -1;
        for (const auto& [g, k] : c.terms()) out.add(fam.face(g, i), sign * k);
    }
    return out;
}

Classification classify(const SimplexFamily& fam, const Chain& c, const std::vector<SimplexGen>& candidates) {
    Classification r;
    r.cycle = c.dim() == 0 || boundary(fam, c).is_zero();

    std::vector<Chain> images;
    std::map<SimplexGen, std::size_t> rows;
    for (const auto& [g, k] : c.terms()) rows.emplace(g, 0);
    for (const auto& h : candidates) {
        if (h.dim() != c.dim() + 1) throw std::invalid_argument("candidate " + to_string(h) + " has the wrong dimension");
        images.push_back(boundary(fam, Chain::of(h)));
        for (const auto& [g, k] : images.back().terms()) rows.emplace(g, 0);
    }
    std::size_t next = 0;
    for (auto& [g, idx] : rows) idx = next++;
    IntMatrix A(rows.size(), images.size());
    for (std::size_t col = 0; col < images.size(); ++col)
        for (const auto& [g, k] : images[col].terms()) A(rows.at(g), col) = k;
    std::vector<Integer> b(rows.size());
    for (const auto& [g, k] : c.terms()) b[rows.at(g)] = k;
    r.boundary = image_solve(A, b).has_value();

    if (c.terms().size() == 2) {
        auto first = c.terms().begin();
        auto second = std::next(first);
        if (first->second == -second->second && (first->second == 1 || first->second == -1))
            r.pocket = c.dim() == 0 ||
                       boundary(fam, Chain::of(first->first)) == boundary(fam, Chain::of(second->first));
    }
    return r;
}

IntMatrix boundary_matrix(const SimplexFamily& fam, std::size_t d) {
    if (d == 0) return IntMatrix(0, fam.generators(0).size());
    const auto& cols = fam.generators(d);
    IntMatrix M(fam.generators(d - 1).size(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t i = 0; i <= d; ++i) M(fam.index_of(fam.face(cols[c], i)), c) += i % 2 == 0 ? 1 : -1;
    return M;
}

FinAbelianGroup family_homology(const SimplexFamily& fam, std::size_t d) {
    return homology(boundary_matrix(fam, d), boundary_matrix(fam, d + 1));
}

nlohmann::json chain_to_json(const Chain& c) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [g, k] : c.terms()) terms.push_back({{"support", g.support}, {"label", g.label}, {"coef", k}});
    return {{"dim", c.dim()}, {"terms", terms}};
}

Chain chain_from_json(const nlohmann::json& j) {
    Chain c(j.at("dim").get<std::size_t>());
    for (const auto& t : j.at("terms"))
        c.add(SimplexGen{t.at("support").get<Support>(), t.value("label", std::string())}, t.at("coef").get<std::int64_t>());
    return c;
}

}  // namespace polyhom
