#include "taskfsa/verify/buchi.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace taskfsa {

bool literal_guard::eval(const valuation& v) const {
    for (const auto& p : pos) {
        if (!v.contains(p)) return false;
    }
    for (const auto& p : neg) {
        if (v.contains(p)) return false;
    }
    return true;
}

formula literal_guard::as_formula() const {
    std::vector<formula> lits;
    for (const auto& p : pos) lits.push_back(formula::atom(p));
    for (const auto& p : neg) lits.push_back(formula::negation(formula::atom(p)));
    return formula::conjunction(std::move(lits));
}

std::string literal_guard::key() const {
    std::string k;
    for (const auto& p : pos) k += "+" + p + ";";
    for (const auto& p : neg) k += "-" + p + ";";
    return k;
}

std::vector<std::vector<std::size_t>> buchi_automaton::successors_by_edge() const {
    std::vector<std::vector<std::size_t>> out(state_count);
    for (std::size_t i = 0; i < edges.size(); ++i) out[edges[i].from].push_back(i);
    return out;
}

namespace {

using op = ltl_formula::op;

// Subformulas of the NNF interned to small integers.
class closure {
public:
    std::size_t intern(const ltl_formula& f) {
        const std::string key = to_text(f);
        auto it = _ids.find(key);
        if (it != _ids.end()) return it->second;
        const std::size_t l = f.arity() >= 1 ? intern(f.lhs()) : 0;
        const std::size_t r = f.arity() == 2 ? intern(f.rhs()) : 0;
        const std::size_t id = _items.size();
        _ids.emplace(key, id);
        _items.push_back(f);
        _lhs.push_back(l);
        _rhs.push_back(r);
        return id;
    }
    const ltl_formula& at(std::size_t id) const { return _items[id]; }
    std::size_t lhs(std::size_t id) const { return _lhs[id]; }
    std::size_t rhs(std::size_t id) const { return _rhs[id]; }
    std::size_t size() const { return _items.size(); }

private:
    std::map<std::string, std::size_t> _ids;
    std::vector<ltl_formula> _items;
    std::vector<std::size_t> _lhs, _rhs;
};

struct tableau_node {
    std::set<std::size_t> incoming;   // 0 stands for the artificial init
    std::set<std::size_t> fresh, old, next;
};

class tableau {
public:
    explicit tableau(const ltl_formula& nnf_formula) {
        _root = cl.intern(nnf_formula);
        tableau_node start;
        start.incoming.insert(0);
        start.fresh.insert(_root);
        expand(std::move(start));
    }

    closure cl;
    std::vector<tableau_node> nodes;   // node i has id i + 1
    std::size_t _root = 0;

private:
    bool contradicts(const tableau_node& n, std::size_t id) const {
        const ltl_formula& f = cl.at(id);
        if (f.type() == op::falsity) return true;
        if (f.type() == op::atom) {
            return std::any_of(n.old.begin(), n.old.end(), [&](std::size_t o) {
                const auto& g = cl.at(o);
                return g.type() == op::negation && g.lhs().type() == op::atom && g.lhs().name() == f.name();
            });
        }
        if (f.type() == op::negation) {
            return std::any_of(n.old.begin(), n.old.end(), [&](std::size_t o) {
                const auto& g = cl.at(o);
                return g.type() == op::atom && g.name() == f.lhs().name();
            });
        }
        return false;
    }

    void add_fresh(tableau_node& n, std::size_t id) {
        if (!n.old.contains(id)) n.fresh.insert(id);
    }

    void expand(tableau_node n) {
        while (true) {
            if (n.fresh.empty()) {
                for (auto& existing : nodes) {
                    if (existing.old == n.old && existing.next == n.next) {
                        existing.incoming.insert(n.incoming.begin(), n.incoming.end());
                        return;
                    }
                }
                nodes.push_back(n);
                tableau_node succ;
                succ.incoming.insert(nodes.size());
                succ.fresh = n.next;
                expand(std::move(succ));
                return;
            }
            const std::size_t eta = *n.fresh.begin();
            n.fresh.erase(n.fresh.begin());
            if (n.old.contains(eta)) continue;
            const ltl_formula& f = cl.at(eta);
            switch (f.type()) {
            case op::truth:
            case op::falsity:
            case op::atom:
            case op::negation:
                if (contradicts(n, eta)) return;
                n.old.insert(eta);
                continue;
            case op::conjunction:
                n.old.insert(eta);
                add_fresh(n, cl.lhs(eta));
                add_fresh(n, cl.rhs(eta));
                continue;
            case op::next:
                n.old.insert(eta);
                n.next.insert(cl.lhs(eta));
                continue;
            case op::disjunction:
            case op::until:
            case op::release: {
                tableau_node a = n, b = n;
                a.old.insert(eta);
                b.old.insert(eta);
                if (f.type() == op::disjunction) {
                    add_fresh(a, cl.lhs(eta));
                    add_fresh(b, cl.rhs(eta));
                } else if (f.type() == op::until) {
                    add_fresh(a, cl.lhs(eta));
                    a.next.insert(eta);
                    add_fresh(b, cl.rhs(eta));
                } else {
                    add_fresh(a, cl.rhs(eta));
                    a.next.insert(eta);
                    add_fresh(b, cl.lhs(eta));
                    add_fresh(b, cl.rhs(eta));
                }
                expand(std::move(a));
                n = std::move(b);
                continue;
            }
            default:
                throw std::logic_error("formula not in negation normal form");
            }
        }
    }
};

literal_guard literals_of(const tableau& t, const tableau_node& n) {
    literal_guard g;
    for (auto id : n.old) {
        const auto& f = t.cl.at(id);
        if (f.type() == op::atom) g.pos.push_back(f.name());
        if (f.type() == op::negation) g.neg.push_back(f.lhs().name());
    }
    std::sort(g.pos.begin(), g.pos.end());
    std::sort(g.neg.begin(), g.neg.end());
    return g;
}

// Quotient by the coarsest bisimulation that respects acceptance and initiality.
buchi_automaton reduce(const buchi_automaton& a) {
    const std::size_t n = a.state_count;
    std::vector<std::size_t> cls(n);
    for (std::size_t s = 0; s < n; ++s) cls[s] = a.accepting[s] ? 1 : 0;
    const auto by_edge = a.successors_by_edge();
    std::size_t classes = 0;
    while (true) {
        std::map<std::pair<std::size_t, std::set<std::pair<std::string, std::size_t>>>, std::size_t> sig_ids;
        std::vector<std::size_t> next(n);
        for (std::size_t s = 0; s < n; ++s) {
            std::set<std::pair<std::string, std::size_t>> sig;
            for (auto e : by_edge[s]) sig.insert({a.edges[e].guard.key(), cls[a.edges[e].to]});
            auto key = std::make_pair(cls[s], std::move(sig));
            auto it = sig_ids.find(key);
            if (it == sig_ids.end()) it = sig_ids.emplace(std::move(key), sig_ids.size()).first;
            next[s] = it->second;
        }
        const std::size_t count = sig_ids.size();
        cls = std::move(next);
        if (count == classes) break;
        classes = count;
    }
    // Renumber classes by first occurrence for a stable layout.
    std::vector<std::size_t> renum(n, static_cast<std::size_t>(-1));
    std::size_t next_id = 0;
    std::deque<std::size_t> order(a.initial.begin(), a.initial.end());
    std::vector<bool> seen(n, false);
    for (auto s : order) seen[s] = true;
    while (!order.empty()) {
        auto s = order.front();
        order.pop_front();
        if (renum[cls[s]] == static_cast<std::size_t>(-1)) renum[cls[s]] = next_id++;
        for (auto e : by_edge[s]) {
            auto t = a.edges[e].to;
            if (!seen[t]) {
                seen[t] = true;
                order.push_back(t);
            }
        }
    }
    buchi_automaton out;
    out.atoms = a.atoms;
    out.state_count = next_id;
    out.accepting.assign(next_id, false);
    std::set<std::tuple<std::size_t, std::string, std::size_t>> seen_edges;
    for (std::size_t s = 0; s < n; ++s) {
        if (!seen[s]) continue;
        out.accepting[renum[cls[s]]] = a.accepting[s];
    }
    for (const auto& e : a.edges) {
        if (!seen[e.from]) continue;
        const auto f = renum[cls[e.from]], t = renum[cls[e.to]];
        if (seen_edges.insert({f, e.guard.key(), t}).second) out.edges.push_back({f, e.guard, t});
    }
    std::set<std::size_t> init;
    for (auto s : a.initial) init.insert(renum[cls[s]]);
    out.initial.assign(init.begin(), init.end());
    return out;
}

// Drops states from which no accepting cycle is reachable.
buchi_automaton trim(const buchi_automaton& a) {
    const std::size_t n = a.state_count;
    const auto by_edge = a.successors_by_edge();
    auto reach_from = [&](std::size_t s) {
        std::vector<bool> r(n, false);
        std::deque<std::size_t> q;
        for (auto e : by_edge[s]) {
            if (!r[a.edges[e].to]) {
                r[a.edges[e].to] = true;
                q.push_back(a.edges[e].to);
            }
        }
        while (!q.empty()) {
            auto u = q.front();
            q.pop_front();
            for (auto e : by_edge[u]) {
                if (!r[a.edges[e].to]) {
                    r[a.edges[e].to] = true;
                    q.push_back(a.edges[e].to);
                }
            }
        }
        return r;
    };
    std::vector<std::vector<bool>> reach(n);
    for (std::size_t s = 0; s < n; ++s) reach[s] = reach_from(s);
    std::vector<bool> good(n, false);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = 0; t < n; ++t) {
            if (a.accepting[t] && reach[t][t] && (s == t || reach[s][t])) good[s] = true;
        }
    }
    std::vector<std::size_t> renum(n, static_cast<std::size_t>(-1));
    buchi_automaton out;
    out.atoms = a.atoms;
    for (std::size_t s = 0; s < n; ++s) {
        if (good[s]) {
            renum[s] = out.state_count++;
            out.accepting.push_back(a.accepting[s]);
        }
    }
    for (auto s : a.initial) {
        if (good[s]) out.initial.push_back(renum[s]);
    }
    for (const auto& e : a.edges) {
        if (good[e.from] && good[e.to]) out.edges.push_back({renum[e.from], e.guard, renum[e.to]});
    }
    return out;
}

} // namespace

buchi_automaton to_buchi(const ltl_formula& f) {
    const ltl_formula g = ltl_nnf(f);
    tableau t(g);

    std::vector<std::size_t> untils;
    for (std::size_t id = 0; id < t.cl.size(); ++id) {
        if (t.cl.at(id).type() == op::until) untils.push_back(id);
    }
    const std::size_t k = std::max<std::size_t>(untils.size(), 1);
    const std::size_t nodes = t.nodes.size();

    // in_set[i][node] says whether the node belongs to acceptance set i.
    std::vector<std::vector<bool>> in_set(k, std::vector<bool>(nodes, true));
    for (std::size_t i = 0; i < untils.size(); ++i) {
        const std::size_t u = untils[i];
        for (std::size_t n = 0; n < nodes; ++n) {
            const auto& old = t.nodes[n].old;
            in_set[i][n] = !old.contains(u) || old.contains(t.cl.rhs(u));
        }
    }

    // State 0 is the initial state; (node n, counter i) is 1 + n * k + i.
    buchi_automaton raw;
    raw.atoms = f.atoms();
    raw.state_count = 1 + nodes * k;
    raw.initial = {0};
    raw.accepting.assign(raw.state_count, false);
    raw.accepting[0] = untils.empty();
    auto sid = [&](std::size_t n, std::size_t i) { return 1 + n * k + i; };
    for (std::size_t n = 0; n < nodes; ++n) {
        raw.accepting[sid(n, 0)] = in_set[0][n];
    }
    for (std::size_t target = 0; target < nodes; ++target) {
        const literal_guard g = literals_of(t, t.nodes[target]);
        for (auto src : t.nodes[target].incoming) {
            if (src == 0) {
                raw.edges.push_back({0, g, sid(target, 0)});
                continue;
            }
            const std::size_t sn = src - 1;
            for (std::size_t i = 0; i < k; ++i) {
                const std::size_t j = in_set[i][sn] ? (i + 1) % k : i;
                raw.edges.push_back({sid(sn, i), g, sid(target, j)});
            }
        }
    }
    return trim(reduce(raw));
}

} // namespace taskfsa
