#include "taskfsa/verify/check.hpp"

#include "taskfsa/verify/buchi.hpp"

#include <algorithm>
#include <deque>

namespace taskfsa {

std::vector<std::string> counterexample::projection() const {
    std::vector<std::string> out;
    for (const auto& s : stem) out.push_back(s.model_state);
    for (const auto& s : loop) out.push_back(s.model_state);
    return out;
}

namespace {

std::vector<std::string> collapse_runs(const std::vector<std::string>& xs) {
    std::vector<std::string> out;
    for (const auto& x : xs) {
        if (out.empty() || out.back() != x) out.push_back(x);
    }
    return out;
}

// Cyclic run collapse plus reduction to the primitive period.
std::vector<std::string> normalize_loop(std::vector<std::string> loop) {
    loop = collapse_runs(loop);
    while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
    const std::size_t n = loop.size();
    for (std::size_t period = 1; period < n; ++period) {
        if (n % period) continue;
        bool repeats = true;
        for (std::size_t i = period; i < n && repeats; ++i) repeats = loop[i] == loop[i - period];
        if (repeats) {
            loop.resize(period);
            break;
        }
    }
    return loop;
}

std::string join_arrow(const std::vector<std::string>& xs) {
    std::string out;
    for (const auto& x : xs) {
        if (!out.empty()) out += " \xE2\x86\x92 ";
        out += x;
    }
    return out;
}

std::vector<valuation> word_of(const std::vector<trace_step>& steps) {
    std::vector<valuation> out;
    for (const auto& s : steps) out.push_back(s.label);
    return out;
}

} // namespace

std::pair<std::vector<std::string>, std::vector<std::string>> counterexample::compressed_projection() const {
    std::vector<std::string> s, l;
    for (const auto& x : stem) s.push_back(x.model_state);
    for (const auto& x : loop) l.push_back(x.model_state);
    s = collapse_runs(s);
    l = normalize_loop(l);
    while (!s.empty()) {
        if (s.back() == l.front()) {
            s.pop_back();
        } else if (s.back() == l.back()) {
            s.pop_back();
            std::rotate(l.rbegin(), l.rbegin() + 1, l.rend());
        } else {
            break;
        }
    }
    return {s, l};
}

std::string counterexample::projection_text() const {
    const auto [s, l] = compressed_projection();
    const std::string loop_text = "loop(" + join_arrow(l) + ")";
    return s.empty() ? loop_text : join_arrow(s) + " \xE2\x86\x92 " + loop_text;
}

std::vector<valuation> counterexample::stem_word() const { return word_of(stem); }
std::vector<valuation> counterexample::loop_word() const { return word_of(loop); }

namespace {

// Explicit product × Büchi graph over reachable pairs.
struct combined {
    struct arc {
        std::size_t to;
        std::size_t product_edge;
    };
    std::vector<std::pair<std::size_t, std::size_t>> nodes;   // (product state, büchi state)
    std::vector<std::vector<arc>> out;
    std::vector<bool> accepting;
    std::vector<std::size_t> roots;
};

combined build_combined(const product& p, const buchi_automaton& b) {
    combined g;
    const auto by_edge = b.successors_by_edge();
    std::vector<std::size_t> id(p.states.size() * std::max<std::size_t>(b.state_count, 1), static_cast<std::size_t>(-1));
    std::deque<std::size_t> queue;
    auto intern = [&](std::size_t ps, std::size_t bs) {
        std::size_t& slot = id[ps * b.state_count + bs];
        if (slot == static_cast<std::size_t>(-1)) {
            slot = g.nodes.size();
            g.nodes.push_back({ps, bs});
            g.out.emplace_back();
            g.accepting.push_back(b.accepting[bs]);
            queue.push_back(slot);
        }
        return slot;
    };
    for (auto bs : b.initial) g.roots.push_back(intern(0, bs));
    while (!queue.empty()) {
        const auto n = queue.front();
        queue.pop_front();
        const auto [ps, bs] = g.nodes[n];
        for (auto e : p.out[ps]) {
            const auto& pe = p.edges[e];
            for (auto be : by_edge[bs]) {
                if (!b.edges[be].guard.eval(pe.label)) continue;
                const auto target = intern(pe.to, b.edges[be].to);
                g.out[n].push_back({target, e});
            }
        }
    }
    return g;
}

// Classic nested depth-first search; true iff an accepting cycle is reachable.
bool nested_dfs(const combined& g) {
    const std::size_t n = g.nodes.size();
    std::vector<char> blue(n, 0), red(n, 0);
    auto red_search = [&](std::size_t seed) {
        std::vector<std::pair<std::size_t, std::size_t>> stack{{seed, 0}};
        while (!stack.empty()) {
            auto& [u, i] = stack.back();
            if (i == g.out[u].size()) {
                stack.pop_back();
                continue;
            }
            const auto v = g.out[u][i++].to;
            if (v == seed) return true;
            if (!red[v]) {
                red[v] = 1;
                stack.push_back({v, 0});
            }
        }
        return false;
    };
    for (auto root : g.roots) {
        if (blue[root]) continue;
        blue[root] = 1;
        std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
        while (!stack.empty()) {
            auto& [u, i] = stack.back();
            if (i < g.out[u].size()) {
                const auto v = g.out[u][i++].to;
                if (!blue[v]) {
                    blue[v] = 1;
                    stack.push_back({v, 0});
                }
                continue;
            }
            const auto done = u;
            stack.pop_back();
            if (g.accepting[done] && red_search(done)) return true;
        }
    }
    return false;
}

trace_step step_of(const product& p, std::size_t edge) {
    const auto& e = p.edges[edge];
    const auto& s = p.states[e.from];
    return {s.model_state, s.controller_state, e.action, e.label};
}

// Shortest stem to an accepting node that lies on a cycle, then the shortest such cycle.
counterexample shortest_witness(const product& p, const combined& g) {
    const std::size_t n = g.nodes.size();
    constexpr auto none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent(n, none), parent_edge(n, none), order;
    std::vector<char> seen(n, 0);
    std::deque<std::size_t> queue;
    for (auto r : g.roots) {
        if (!seen[r]) {
            seen[r] = 1;
            queue.push_back(r);
        }
    }
    while (!queue.empty()) {
        const auto u = queue.front();
        queue.pop_front();
        order.push_back(u);
        for (const auto& a : g.out[u]) {
            if (!seen[a.to]) {
                seen[a.to] = 1;
                parent[a.to] = u;
                parent_edge[a.to] = a.product_edge;
                queue.push_back(a.to);
            }
        }
    }
    for (const auto s : order) {
        if (!g.accepting[s]) continue;
        std::vector<std::size_t> cparent(n, none), cedge(n, none);
        std::vector<char> cseen(n, 0);
        std::deque<std::size_t> q{s};
        bool closed = false;
        std::size_t last = none, last_edge = none;
        while (!q.empty() && !closed) {
            const auto u = q.front();
            q.pop_front();
            for (const auto& a : g.out[u]) {
                if (a.to == s) {
                    closed = true;
                    last = u;
                    last_edge = a.product_edge;
                    break;
                }
                if (!cseen[a.to]) {
                    cseen[a.to] = 1;
                    cparent[a.to] = u;
                    cedge[a.to] = a.product_edge;
                    q.push_back(a.to);
                }
            }
        }
        if (!closed) continue;

        counterexample cex;
        std::vector<std::size_t> stem_edges;
        for (auto v = s; parent[v] != none; v = parent[v]) stem_edges.push_back(parent_edge[v]);
        std::reverse(stem_edges.begin(), stem_edges.end());
        for (auto e : stem_edges) cex.stem.push_back(step_of(p, e));

        std::vector<std::size_t> loop_edges{last_edge};
        for (auto v = last; v != s; v = cparent[v]) loop_edges.push_back(cedge[v]);
        std::reverse(loop_edges.begin(), loop_edges.end());
        for (auto e : loop_edges) cex.loop.push_back(step_of(p, e));
        return cex;
    }
    throw std::logic_error("accepting cycle reported but no witness found");
}

counterexample deadlock_witness(const product& p) {
    constexpr auto none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent_edge(p.states.size(), none);
    std::vector<char> seen(p.states.size(), 0);
    std::deque<std::size_t> q{0};
    seen[0] = 1;
    while (!q.empty()) {
        const auto u = q.front();
        q.pop_front();
        for (auto e : p.out[u]) {
            if (p.edges[e].stuck) {
                counterexample cex;
                std::vector<std::size_t> path;
                for (auto v = u; parent_edge[v] != none; v = p.edges[parent_edge[v]].from) path.push_back(parent_edge[v]);
                std::reverse(path.begin(), path.end());
                for (auto pe : path) cex.stem.push_back(step_of(p, pe));
                cex.loop.push_back(step_of(p, e));
                return cex;
            }
            const auto v = p.edges[e].to;
            if (!seen[v]) {
                seen[v] = 1;
                parent_edge[v] = e;
                q.push_back(v);
            }
        }
    }
    throw std::logic_error("no deadlock reachable");
}

} // namespace

verdict check_product(const product& p, const ltl_formula& spec, const product_options& opts) {
    if (opts.deadlock_as_failure &&
        std::any_of(p.edges.begin(), p.edges.end(), [](const product_edge& e) { return e.stuck; })) {
        return {false, deadlock_witness(p)};
    }
    const buchi_automaton neg = to_buchi(ltl_not(spec));
    if (neg.state_count == 0) return {true, std::nullopt};
    const combined g = build_combined(p, neg);
    if (!nested_dfs(g)) return {true, std::nullopt};
    return {false, shortest_witness(p, g)};
}

verdict check(const model& m, const controller& c, const ltl_formula& spec, const product_options& opts) {
    return check_product(build_product(m, c), spec, opts);
}

bool counterexample_valid(const product& p, const counterexample& cex) {
    if (cex.loop.empty()) return false;
    std::vector<trace_step> all = cex.stem;
    all.insert(all.end(), cex.loop.begin(), cex.loop.end());
    auto state_of = [&](const trace_step& s) { return p.index_of({s.model_state, s.controller_state}); };
    if (state_of(all.front()) != 0) return false;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto from = state_of(all[i]);
        const auto& next = i + 1 < all.size() ? all[i + 1] : cex.loop.front();
        const auto to = state_of(next);
        if (from == product::npos || to == product::npos) return false;
        const bool ok = std::any_of(p.out[from].begin(), p.out[from].end(), [&](std::size_t e) {
            const auto& pe = p.edges[e];
            return pe.to == to && pe.action == all[i].action && pe.label == all[i].label;
        });
        if (!ok) return false;
    }
    return true;
}

bool counterexample_violates(const counterexample& cex, const ltl_formula& spec) {
    return !eval_lasso(spec, cex.stem_word(), cex.loop_word());
}

} // namespace taskfsa
