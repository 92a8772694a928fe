#include "taskfsa/refine/session.hpp"

#include "taskfsa/builder/build.hpp"
#include "taskfsa/glm/queries.hpp"

#include <algorithm>

namespace taskfsa {

std::string_view status_name(session_status s) {
    switch (s) {
    case session_status::fail: return "fail";
    case session_status::pass: return "pass";
    case session_status::unrepresentable: return "unrepresentable";
    }
    return "fail";
}

session_status status_from_name(std::string_view name) {
    if (name == "fail") return session_status::fail;
    if (name == "pass") return session_status::pass;
    if (name == "unrepresentable") return session_status::unrepresentable;
    throw precondition_error("unknown session status: " + std::string(name));
}

std::string_view iteration_kind_name(iteration_kind k) {
    switch (k) {
    case iteration_kind::initial: return "initial";
    case iteration_kind::manual: return "manual";
    case iteration_kind::automatic: return "auto";
    case iteration_kind::prune: return "prune";
    }
    return "initial";
}

iteration_kind iteration_kind_from_name(std::string_view name) {
    if (name == "initial") return iteration_kind::initial;
    if (name == "manual") return iteration_kind::manual;
    if (name == "auto") return iteration_kind::automatic;
    if (name == "prune") return iteration_kind::prune;
    throw precondition_error("unknown iteration kind: " + std::string(name));
}

bool iteration::passes() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const verdict& v) { return v.pass; });
}

const iteration& refinement_session::current() const {
    if (history.empty()) throw precondition_error("session has no iterations");
    return history.back();
}

std::size_t refinement_session::depth() const {
    std::size_t d = 0;
    for (const auto& n : current().frontier) d = std::max(d, number_depth(n));
    return d;
}

std::vector<verdict> verify_all(const model& m, const controller& c, const std::vector<std::string>& specs) {
    std::vector<verdict> out;
    out.reserve(specs.size());
    for (const auto& s : specs) out.push_back(check(m, c, parse_ltl(s)));
    return out;
}

std::optional<controller> bypass_noop(const controller& c, std::string_view state) {
    if (state == c.absorbing || !c.has_state(state)) return std::nullopt;
    const auto out = c.outgoing(state);
    if (out.size() != 1) return std::nullopt;
    const auto& only = *out.front();
    if (!only.cond.is_true() || !only.out.empty() || only.to == state) return std::nullopt;
    const std::string target = only.to;

    controller r = c;
    std::erase_if(r.states, [&](const controller_state& s) { return s.id == state; });
    std::erase_if(r.transitions, [&](const transition& t) { return t.from == state; });
    for (auto& t : r.transitions) {
        if (t.to == state) t.to = target;
    }
    if (r.initial == state) r.initial = target;
    r.normalize();
    return r;
}

controller rebuild(const iteration& it, const synonym_map& synonyms) {
    auto c = synonyms.apply(build_steps(it.tree, it.frontier).ctrl);
    for (const auto& s : it.bypassed) {
        auto next = bypass_noop(c, s);
        if (!next) throw precondition_error("recorded bypass no longer applies to state " + s);
        c = std::move(*next);
    }
    return c;
}

namespace {

std::vector<std::string> prompts_since(const glm_client& glm, std::size_t start) {
    const auto log = glm.log();
    std::vector<std::string> out;
    for (std::size_t i = start; i < log.entries.size(); ++i) out.push_back(log.entries[i].prompt);
    return out;
}

// Builds, consolidates and verifies it in place; the session's map grows.
void compile(refinement_session& s, iteration& it, glm_client& glm) {
    const auto built = build_steps(it.tree, it.frontier).ctrl;
    auto merged = consolidate_synonyms(built, s.mdl, glm, s.synonyms);
    s.synonyms = std::move(merged.map);
    it.ctrl = std::move(merged.ctrl);
    for (const auto& b : it.bypassed) {
        auto next = bypass_noop(it.ctrl, b);
        if (!next) throw precondition_error("bypass does not apply to state " + b);
        it.ctrl = std::move(*next);
    }
    it.verdicts = verify_all(s.mdl, it.ctrl, s.specs);
}

void append(refinement_session& s, iteration it) {
    s.status = it.passes() ? session_status::pass : session_status::fail;
    s.history.push_back(std::move(it));
}

void require_fail(const refinement_session& s, std::string_view op) {
    if (s.history.empty()) throw precondition_error(std::string(op) + " needs a started session");
    if (s.status != session_status::fail) {
        throw precondition_error(std::string(op) + " needs a failing session, status is " +
                                 std::string(status_name(s.status)));
    }
}

// Frontier with the children of parent replaced by parent itself.
std::vector<std::string> collapse(const std::vector<std::string>& frontier, const std::string& parent) {
    std::vector<std::string> out;
    bool placed = false;
    for (const auto& n : frontier) {
        if (is_descendant(n, parent)) {
            if (!placed) out.push_back(parent);
            placed = true;
        } else {
            out.push_back(n);
        }
    }
    return out;
}

// Parents whose children are all compiled leaves; deepest first, then document order.
std::vector<std::string> collapsible_groups(const step_tree& tree, const std::vector<std::string>& frontier) {
    std::set<std::string, dotted_order> parents;
    for (const auto& n : frontier) {
        const auto p = parent_number(n);
        if (!p.empty()) parents.insert(p);
    }
    std::vector<std::string> out;
    for (const auto& p : parents) {
        const auto kids = tree.children(p);
        const bool all_leaves = std::all_of(kids.begin(), kids.end(), [&](const std::string& k) {
            return std::find(frontier.begin(), frontier.end(), k) != frontier.end();
        });
        if (all_leaves) out.push_back(p);
    }
    std::stable_sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
        return number_depth(a) > number_depth(b);
    });
    return out;
}

} // namespace

refinement_session start_session_from_tree(const step_tree& tree, const model& m, const std::vector<std::string>& specs,
                                           glm_client& glm, const session_options& options) {
    if (options.max_depth == 0) throw precondition_error("max_depth must be positive");
    for (const auto& s : specs) (void)parse_ltl(s);
    refinement_session s;
    s.task = tree.task();
    s.mdl = m;
    s.specs = specs;
    s.max_depth = options.max_depth;
    s.params = options.params;

    const auto start = glm.log().entries.size();
    iteration it;
    it.kind = iteration_kind::initial;
    it.tree = tree;
    it.frontier = tree.leaves();
    compile(s, it, glm);
    it.prompts = prompts_since(glm, start);
    append(s, std::move(it));
    return s;
}

refinement_session start_session(const std::string& task, const model& m, const std::vector<std::string>& specs,
                                 glm_client& glm, const session_options& options) {
    if (options.depth == 0 || options.depth > options.max_depth) {
        throw precondition_error("depth must be between 1 and max_depth");
    }
    const auto start = glm.log().entries.size();
    const auto tree = query_steps(glm, task, options.depth, options.params);
    auto s = start_session_from_tree(tree, m, specs, glm, options);
    s.history.front().prompts = prompts_since(glm, start);
    return s;
}

refinement_session manual_refine(const refinement_session& s, std::string_view instruction, glm_client& glm) {
    require_fail(s, "manual refinement");
    if (normalize_whitespace(instruction).empty()) throw precondition_error("empty refinement instruction");
    refinement_session out = s;
    const auto start = glm.log().entries.size();
    const auto& prev = s.current();
    const auto texts = query_refinement(glm, prev.tree.sibling_steps(""), instruction, s.params);

    iteration it;
    it.kind = iteration_kind::manual;
    it.instruction = std::string(instruction);
    it.tree = step_tree(s.task);
    const auto log = glm.log();
    it.tree.set_children("", texts, log.entries.back().prompt + log.entries.back().completion);
    it.frontier = it.tree.leaves();
    compile(out, it, glm);
    it.prompts = prompts_since(glm, start);
    append(out, std::move(it));
    return out;
}

refinement_session auto_refine(const refinement_session& s, glm_client& glm) {
    if (s.history.empty()) throw precondition_error("automatic refinement needs a started session");
    if (s.status == session_status::pass) return s;
    require_fail(s, "automatic refinement");
    refinement_session out = s;
    while (out.status == session_status::fail) {
        const auto depth = out.depth();
        if (depth >= out.max_depth) {
            out.status = session_status::unrepresentable;
            break;
        }
        const auto start = glm.log().entries.size();
        const auto& prev = out.current();
        iteration it;
        it.kind = iteration_kind::automatic;
        it.tree = prev.tree;
        for (const auto& n : prev.frontier) {
            if (number_depth(n) != depth) {
                it.frontier.push_back(n);
                continue;
            }
            query_substeps(glm, it.tree, n, out.params);
            for (const auto& k : it.tree.children(n)) it.frontier.push_back(k);
        }
        compile(out, it, glm);
        it.prompts = prompts_since(glm, start);
        append(out, std::move(it));
    }
    return out;
}

refinement_session prune(const refinement_session& s, glm_client& glm) {
    if (s.history.empty()) throw precondition_error("pruning needs a started session");
    if (s.status != session_status::pass) throw precondition_error("pruning needs a passing session");
    refinement_session out = s;
    const auto start = glm.log().entries.size();

    iteration best = s.current();
    best.kind = iteration_kind::prune;
    best.instruction.clear();

    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& parent : collapsible_groups(best.tree, best.frontier)) {
            iteration trial = best;
            trial.frontier = collapse(best.frontier, parent);
            trial.tree.remove_children(parent);
            trial.bypassed.clear();
            refinement_session scratch = out;
            try {
                compile(scratch, trial, glm);
            } catch (const dangling_step_ref&) {
                continue;
            }
            if (!trial.passes()) continue;
            out.synonyms = scratch.synonyms;
            best = std::move(trial);
            changed = true;
        }
    }

    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& st : best.ctrl.states) {
            auto candidate = bypass_noop(best.ctrl, st.id);
            if (!candidate) continue;
            auto verdicts = verify_all(out.mdl, *candidate, out.specs);
            if (!std::all_of(verdicts.begin(), verdicts.end(), [](const verdict& v) { return v.pass; })) continue;
            best.bypassed.push_back(st.id);
            best.ctrl = std::move(*candidate);
            best.verdicts = std::move(verdicts);
            changed = true;
            break;
        }
    }

    best.prompts = prompts_since(glm, start);
    append(out, std::move(best));
    return out;
}

} // namespace taskfsa
