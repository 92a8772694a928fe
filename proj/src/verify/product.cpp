#include "taskfsa/verify/product.hpp"

#include <deque>
#include <map>

namespace taskfsa {

namespace {

std::string join(const std::set<std::string>& items) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += ", ";
        out += "'" + s + "'";
    }
    return out;
}

std::string mismatch_message(const std::set<std::string>& actions, const std::set<std::string>& conditions) {
    std::string msg = "controller vocabulary not declared by the model;";
    if (!actions.empty()) msg += " actions: " + join(actions) + ";";
    if (!conditions.empty()) msg += " conditions: " + join(conditions) + ";";
    return msg + " run synonym consolidation";
}

} // namespace

alphabet_mismatch::alphabet_mismatch(std::set<std::string> actions, std::set<std::string> conditions)
    : error(mismatch_message(actions, conditions)), _actions(std::move(actions)), _conditions(std::move(conditions)) {}

std::size_t product::index_of(const product_state& s) const {
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i] == s) return i;
    }
    return npos;
}

product build_product(const model& m, const controller& c) {
    std::set<std::string> bad_actions, bad_conditions;
    for (const auto& t : c.transitions) {
        for (const auto& a : t.out) {
            if (!m.action_props.contains(a)) bad_actions.insert(a);
        }
        for (const auto& p : t.cond.atoms()) {
            if (!m.label_props.contains(p)) bad_conditions.insert(p);
        }
    }
    if (!bad_actions.empty() || !bad_conditions.empty()) throw alphabet_mismatch(bad_actions, bad_conditions);

    product p;
    std::map<std::pair<std::string, std::string>, std::size_t> ids;
    std::deque<std::size_t> queue;
    auto intern = [&](const std::string& ms, const std::string& cs) {
        auto [it, fresh] = ids.emplace(std::make_pair(ms, cs), p.states.size());
        if (fresh) {
            p.states.push_back({ms, cs});
            p.out.emplace_back();
            queue.push_back(it->second);
        }
        return it->second;
    };
    intern(m.initial, c.initial);

    while (!queue.empty()) {
        const std::size_t s = queue.front();
        queue.pop_front();
        const std::string ms = p.states[s].model_state;
        const std::string cs = p.states[s].controller_state;
        const auto& labels = m.label_of(ms);
        std::set<std::pair<std::size_t, action_set>> emitted;
        for (const auto& t : c.transitions) {
            if (t.from != cs || !t.cond.eval(labels)) continue;
            for (const auto& mt : m.transitions) {
                if (mt.from != ms || !guard_enabled(mt.guard, t.out)) continue;
                const std::size_t target = intern(mt.to, t.to);
                if (!emitted.insert({target, t.out}).second) continue;
                std::set<std::string> label = labels;
                label.insert(t.out.begin(), t.out.end());
                p.out[s].push_back(p.edges.size());
                p.edges.push_back({s, target, t.out, std::move(label), false});
            }
        }
        if (p.out[s].empty()) {
            std::set<std::string> label = labels;
            label.insert(std::string(stuck_prop));
            p.out[s].push_back(p.edges.size());
            p.edges.push_back({s, s, {}, std::move(label), true});
        }
    }
    return p;
}

} // namespace taskfsa
