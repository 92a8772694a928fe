#include "taskfsa/core/isomorphism.hpp"

#include <algorithm>
#include <deque>

namespace taskfsa {

namespace {

using edge_list = std::vector<std::pair<action_set, formula>>;

struct indexed {
    std::vector<std::string> ids;
    std::map<std::pair<std::size_t, std::size_t>, edge_list> edges;
    std::vector<std::size_t> out_degree, in_degree;
    std::size_t initial = 0, absorbing = 0;
};

indexed index_of(controller c) {
    c.normalize();
    indexed g;
    for (const auto& s : c.states) g.ids.push_back(s.id);
    g.out_degree.assign(g.ids.size(), 0);
    g.in_degree.assign(g.ids.size(), 0);
    g.initial = c.state_index(c.initial);
    g.absorbing = c.state_index(c.absorbing);
    for (const auto& t : c.transitions) {
        const auto f = c.state_index(t.from), to = c.state_index(t.to);
        g.edges[{f, to}].push_back({t.out, t.cond});
        ++g.out_degree[f];
        ++g.in_degree[to];
    }
    for (auto& [_, list] : g.edges) {
        std::sort(list.begin(), list.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    }
    return g;
}

bool same_edges(const indexed& a, std::pair<std::size_t, std::size_t> ka,
                const indexed& b, std::pair<std::size_t, std::size_t> kb) {
    auto ia = a.edges.find(ka);
    auto ib = b.edges.find(kb);
    const bool ea = ia == a.edges.end(), eb = ib == b.edges.end();
    if (ea || eb) return ea == eb;
    const auto& la = ia->second;
    const auto& lb = ib->second;
    if (la.size() != lb.size()) return false;
    for (std::size_t i = 0; i < la.size(); ++i) {
        if (la[i].first != lb[i].first || !equivalent(la[i].second, lb[i].second)) return false;
    }
    return true;
}

class matcher {
public:
    matcher(const indexed& a, const indexed& b) : _a(a), _b(b) {
        const std::size_t n = a.ids.size();
        _map.assign(n, npos);
        _used.assign(n, false);
        // Visit states of a breadth-first from the initial state so neighbours are constrained early.
        std::vector<bool> seen(n, false);
        std::deque<std::size_t> queue{a.initial};
        seen[a.initial] = true;
        while (!queue.empty()) {
            auto s = queue.front();
            queue.pop_front();
            _order.push_back(s);
            for (const auto& [key, _] : a.edges) {
                for (auto nb : {key.first == s ? key.second : npos, key.second == s ? key.first : npos}) {
                    if (nb != npos && !seen[nb]) {
                        seen[nb] = true;
                        queue.push_back(nb);
                    }
                }
            }
        }
        for (std::size_t s = 0; s < n; ++s) {
            if (!seen[s]) _order.push_back(s);
        }
    }

    bool run() { return extend(0); }

    std::map<std::string, std::string> result() const {
        std::map<std::string, std::string> out;
        for (std::size_t i = 0; i < _map.size(); ++i) out[_a.ids[i]] = _b.ids[_map[i]];
        return out;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    bool consistent(std::size_t x, std::size_t y) const {
        if (_a.out_degree[x] != _b.out_degree[y] || _a.in_degree[x] != _b.in_degree[y]) return false;
        if ((x == _a.initial) != (y == _b.initial)) return false;
        if ((x == _a.absorbing) != (y == _b.absorbing)) return false;
        if (!same_edges(_a, {x, x}, _b, {y, y})) return false;
        for (std::size_t u = 0; u < _map.size(); ++u) {
            if (_map[u] == npos || u == x) continue;
            if (!same_edges(_a, {x, u}, _b, {y, _map[u]})) return false;
            if (!same_edges(_a, {u, x}, _b, {_map[u], y})) return false;
        }
        return true;
    }

    bool extend(std::size_t depth) {
        if (depth == _order.size()) return true;
        const std::size_t x = _order[depth];
        for (std::size_t y = 0; y < _b.ids.size(); ++y) {
            if (_used[y] || !consistent(x, y)) continue;
            _map[x] = y;
            _used[y] = true;
            if (extend(depth + 1)) return true;
            _map[x] = npos;
            _used[y] = false;
        }
        return false;
    }

    const indexed& _a;
    const indexed& _b;
    std::vector<std::size_t> _order;
    std::vector<std::size_t> _map;
    std::vector<bool> _used;
};

} // namespace

std::optional<std::map<std::string, std::string>> find_isomorphism(const controller& a, const controller& b) {
    if (a.states.size() != b.states.size()) return std::nullopt;
    const indexed ia = index_of(a);
    const indexed ib = index_of(b);
    std::size_t ea = 0, eb = 0;
    for (const auto& [_, l] : ia.edges) ea += l.size();
    for (const auto& [_, l] : ib.edges) eb += l.size();
    if (ea != eb) return std::nullopt;
    matcher m(ia, ib);
    if (!m.run()) return std::nullopt;
    return m.result();
}

controller rewrite_labels(const controller& c, const label_rewrite& f) {
    controller out = c;
    out.props.clear();
    out.actions.clear();
    for (const auto& p : c.props) out.props.insert(f(p));
    for (const auto& a : c.actions) out.actions.insert(f(a));
    for (auto& t : out.transitions) {
        t.cond = t.cond.map_atoms(f);
        action_set renamed;
        for (const auto& a : t.out) renamed.insert(f(a));
        t.out = std::move(renamed);
    }
    out.normalize();
    return out;
}

} // namespace taskfsa
