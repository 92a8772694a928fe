#include "support.hpp"

#include "taskfsa/builder/build.hpp"
#include "taskfsa/core/isomorphism.hpp"
#include "taskfsa/glm/queries.hpp"
#include "taskfsa/refine/session.hpp"

#include <cctype>
#include <functional>

namespace taskfsa::testing {

std::string fixture_path(const std::string& relative) { return std::string(TASKFSA_FIXTURES_DIR) + "/" + relative; }

model load_model(const std::string& name) {
    return parse_model_document(read_text_file(fixture_path("models/" + name + ".json")));
}

std::string load_spec(const std::string& name) {
    return parse_spec_document(read_text_file(fixture_path("specs/" + name + ".json"))).ltl;
}

transcript load_transcript(const std::string& name) {
    return parse_transcript_document(read_text_file(fixture_path("transcripts/" + name + ".json")));
}

glm_client replay_client(const std::string& name) {
    return glm_client(std::make_shared<replay_backend>(load_transcript(name)));
}

expected_controller load_expected(const std::string& name) {
    const auto doc = json::parse(read_text_file(fixture_path("expected/" + name + ".json")));
    expected_controller e;
    e.name = name;
    for (const auto& [k, v] : doc.at("aliases").items()) e.aliases[k] = v.get<std::string>();
    const auto raw = controller_from_json(doc.at("controller"), "/controller");
    e.ctrl = rewrite_labels(raw, [&](const std::string& s) {
        const auto it = e.aliases.find(s);
        return it == e.aliases.end() ? s : it->second;
    });
    return e;
}

std::optional<std::string> mismatch(const controller& built, const std::string& expected_name) {
    const auto e = load_expected(expected_name);
    if (find_isomorphism(built, e.ctrl)) return std::nullopt;
    std::string why = "built " + std::to_string(built.states.size()) + " states, expected " +
                      std::to_string(e.ctrl.states.size()) + "; built actions:";
    for (const auto& a : built.actions) why += " [" + a + "]";
    why += "; expected actions:";
    for (const auto& a : e.ctrl.actions) why += " [" + a + "]";
    return why;
}

std::vector<refinement_session> crossroad_history() {
    auto glm = replay_client("crossroad");
    auto s = start_session("Cross the road", load_model("crossroad"), {load_spec("crossroad")}, glm);
    std::vector<refinement_session> out{s};
    out.push_back(s = auto_refine(s, glm));
    out.push_back(prune(s, glm));
    return out;
}

std::vector<refinement_session> crossroad_light_history() {
    auto glm = replay_client("crossroad_light");
    auto s = start_session("Cross the road at the traffic light", load_model("crossroad_light"),
                           {load_spec("crossroad_light")}, glm);
    std::vector<refinement_session> out{s};
    out.push_back(s = manual_refine(s, "with an action \"approach pedestrian crossing\"", glm));
    out.push_back(manual_refine(
        s, "to ensure the action \"cross the road\" is performed under conditions \"traffic light turns green\" and "
           "\"no cars are coming\"",
        glm));
    return out;
}

std::vector<refinement_session> wifi_history() {
    auto glm = replay_client("wifi");
    auto s = start_session("Reboot the modem and router", load_model("wifi"), {load_spec("wifi")}, glm);
    std::vector<refinement_session> out{s};
    out.push_back(s = manual_refine(s, "include \"wait two minutes\" after \"plug in modem\"", glm));
    out.push_back(manual_refine(s, "include \"wait two minutes\" after \"turn on router\"", glm));
    return out;
}

namespace {

step_tree replay_tree(const std::string& fixture, const std::string& task, const std::vector<std::string>& expand) {
    auto glm = replay_client(fixture);
    auto tree = query_steps(glm, task, 1);
    for (const auto& n : expand) query_substeps(glm, tree, n);
    return tree;
}

} // namespace

const std::vector<std::string>& expected_names() {
    static const std::vector<std::string> names = {
        "crossroad_merged",        "crossroad_substeps",      "dental_layered",   "mpc_layered",
        "crossroad_light_initial", "crossroad_light_manual1", "crossroad_light_manual2",
        "crossroad_initial",       "crossroad_pruned",        "wifi_initial"};
    return names;
}

controller built_for(const std::string& name) {
    if (name == "crossroad_merged") {
        return merge_branches(crossroad_history()[0].ctrl(), crossroad_light_history()[0].ctrl(), "traffic light");
    }
    if (name == "crossroad_substeps") return crossroad_history()[1].ctrl();
    if (name == "crossroad_initial") return crossroad_history()[0].ctrl();
    if (name == "crossroad_pruned") return crossroad_history()[2].ctrl();
    if (name == "crossroad_light_initial") return crossroad_light_history()[0].ctrl();
    if (name == "crossroad_light_manual1") return crossroad_light_history()[1].ctrl();
    if (name == "crossroad_light_manual2") return crossroad_light_history()[2].ctrl();
    if (name == "dental_layered")
        return build_layered(replay_tree("dental", "Find a dentist and make an appointment", {"1", "1.3"}));
    if (name == "mpc_layered") return build_layered(replay_tree("mpc", "Secure multi-party computation", {"2", "3"}));
    if (name == "wifi_initial") return build_top_level(replay_tree("wifi", "Reboot the modem and router", {})).ctrl;
    throw precondition_error("no builder for " + name);
}

// ---- DOT grammar ----

namespace {

struct dot_token {
    enum kind { id, lbrace, rbrace, lbracket, rbracket, semicolon, comma, equals, colon, arrow, dash, end } type;
    std::string text;
    std::size_t pos;
};

bool lex_dot(std::string_view s, std::vector<dot_token>& out, std::vector<std::string>& problems) {
    std::size_t i = 0;
    auto at = [&](std::size_t k) { return k < s.size() ? s[k] : '\0'; };
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '/' && at(i + 1) == '/') {
            while (i < s.size() && s[i] != '\n') ++i;
        } else if (c == '/' && at(i + 1) == '*') {
            const auto close = s.find("*/", i + 2);
            if (close == std::string_view::npos) {
                problems.push_back("unterminated comment");
                return false;
            }
            i = close + 2;
        } else if (c == '"') {
            std::string text;
            std::size_t k = i + 1;
            bool closed = false;
            for (; k < s.size(); ++k) {
                if (s[k] == '\\' && k + 1 < s.size()) {
                    text += s[k];
                    text += s[++k];
                } else if (s[k] == '"') {
                    closed = true;
                    break;
                } else {
                    text += s[k];
                }
            }
            if (!closed) {
                problems.push_back("unterminated string at " + std::to_string(i));
                return false;
            }
            out.push_back({dot_token::id, text, i});
            i = k + 1;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
                   static_cast<unsigned char>(c) >= 0x80) {
            std::size_t k = i;
            while (k < s.size() && (std::isalnum(static_cast<unsigned char>(s[k])) || s[k] == '_' ||
                                    static_cast<unsigned char>(s[k]) >= 0x80))
                ++k;
            out.push_back({dot_token::id, std::string(s.substr(i, k - i)), i});
            i = k;
        } else if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && std::isdigit(static_cast<unsigned char>(at(i + 1)))) ||
                   (c == '-' && (std::isdigit(static_cast<unsigned char>(at(i + 1))) || at(i + 1) == '.'))) {
            std::size_t k = i + 1;
            while (k < s.size() && (std::isdigit(static_cast<unsigned char>(s[k])) || s[k] == '.')) ++k;
            out.push_back({dot_token::id, std::string(s.substr(i, k - i)), i});
            i = k;
        } else if (c == '-' && at(i + 1) == '>') {
            out.push_back({dot_token::arrow, "->", i});
            i += 2;
        } else if (c == '-' && at(i + 1) == '-') {
            out.push_back({dot_token::dash, "--", i});
            i += 2;
        } else {
            dot_token::kind k;
            switch (c) {
            case '{': k = dot_token::lbrace; break;
            case '}': k = dot_token::rbrace; break;
            case '[': k = dot_token::lbracket; break;
            case ']': k = dot_token::rbracket; break;
            case ';': k = dot_token::semicolon; break;
            case ',': k = dot_token::comma; break;
            case '=': k = dot_token::equals; break;
            case ':': k = dot_token::colon; break;
            default:
                problems.push_back(std::string("unexpected character '") + c + "' at " + std::to_string(i));
                return false;
            }
            out.push_back({k, std::string(1, c), i});
            ++i;
        }
    }
    out.push_back({dot_token::end, "", s.size()});
    return true;
}

bool keyword(const dot_token& t, std::string_view w) {
    if (t.type != dot_token::id || t.text.size() != w.size()) return false;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(t.text[i])) != w[i]) return false;
    }
    return true;
}

struct dot_parser {
    std::vector<dot_token> toks;
    std::size_t i = 0;
    bool directed = true;
    std::vector<std::string> problems;

    const dot_token& peek() const { return toks[i]; }
    bool accept(dot_token::kind k) {
        if (peek().type != k) return false;
        ++i;
        return true;
    }
    void expect(dot_token::kind k, const char* what) {
        if (!accept(k)) throw std::runtime_error(std::string("expected ") + what + " at " + std::to_string(peek().pos));
    }

    void graph() {
        if (keyword(peek(), "strict")) ++i;
        if (keyword(peek(), "digraph")) {
            directed = true;
        } else if (keyword(peek(), "graph")) {
            directed = false;
        } else {
            throw std::runtime_error("expected graph or digraph");
        }
        ++i;
        if (peek().type == dot_token::id) ++i;
        expect(dot_token::lbrace, "{");
        stmt_list();
        expect(dot_token::rbrace, "}");
        if (peek().type != dot_token::end) throw std::runtime_error("trailing input after graph");
    }

    void stmt_list() {
        while (peek().type != dot_token::rbrace && peek().type != dot_token::end) {
            stmt();
            accept(dot_token::semicolon);
        }
    }

    void attr_list() {
        do {
            expect(dot_token::lbracket, "[");
            while (peek().type == dot_token::id) {
                ++i;
                expect(dot_token::equals, "=");
                expect(dot_token::id, "attribute value");
                if (!accept(dot_token::comma)) accept(dot_token::semicolon);
            }
            expect(dot_token::rbracket, "]");
        } while (peek().type == dot_token::lbracket);
    }

    void subgraph() {
        if (keyword(peek(), "subgraph")) {
            ++i;
            if (peek().type == dot_token::id) ++i;
        }
        expect(dot_token::lbrace, "{");
        stmt_list();
        expect(dot_token::rbrace, "}");
    }

    void node_or_subgraph() {
        if (peek().type == dot_token::lbrace || keyword(peek(), "subgraph")) {
            subgraph();
            return;
        }
        expect(dot_token::id, "node id");
        if (accept(dot_token::colon)) {
            expect(dot_token::id, "port");
            if (accept(dot_token::colon)) expect(dot_token::id, "compass point");
        }
    }

    void stmt() {
        const auto& t = peek();
        if (keyword(t, "graph") || keyword(t, "node") || keyword(t, "edge")) {
            ++i;
            attr_list();
            return;
        }
        if (t.type == dot_token::id && toks[i + 1].type == dot_token::equals) {
            i += 2;
            expect(dot_token::id, "value");
            return;
        }
        node_or_subgraph();
        bool edge = false;
        while (peek().type == dot_token::arrow || peek().type == dot_token::dash) {
            if ((peek().type == dot_token::arrow) != directed)
                throw std::runtime_error("edge operator does not match graph kind at " + std::to_string(peek().pos));
            ++i;
            node_or_subgraph();
            edge = true;
        }
        (void)edge;
        if (peek().type == dot_token::lbracket) attr_list();
    }
};

} // namespace

std::vector<std::string> dot_problems(std::string_view text) {
    dot_parser p;
    if (!lex_dot(text, p.toks, p.problems)) return p.problems;
    try {
        p.graph();
    } catch (const std::runtime_error& e) {
        p.problems.push_back(e.what());
    }
    return p.problems;
}

// ---- reference LTL semantics ----

namespace {

using bits = std::vector<bool>;

bits eval_positions(const ltl_formula& f, const std::vector<valuation>& word, std::size_t loop_start) {
    const std::size_t n = word.size();
    auto next = [&](std::size_t i) { return i + 1 < n ? i + 1 : loop_start; };
    using op = ltl_formula::op;
    switch (f.type()) {
    case op::truth: return bits(n, true);
    case op::falsity: return bits(n, false);
    case op::atom: {
        bits out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = word[i].contains(f.name());
        return out;
    }
    case op::negation: {
        auto a = eval_positions(f.lhs(), word, loop_start);
        a.flip();
        return a;
    }
    case op::next: {
        const auto a = eval_positions(f.lhs(), word, loop_start);
        bits out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = a[next(i)];
        return out;
    }
    default: break;
    }
    const bool unary_temporal = f.type() == op::eventually || f.type() == op::always;
    const auto a = unary_temporal ? bits(n, f.type() == op::eventually) : eval_positions(f.lhs(), word, loop_start);
    const auto b = eval_positions(unary_temporal ? f.lhs() : f.rhs(), word, loop_start);
    bits out(n);
    switch (f.type()) {
    case op::conjunction:
        for (std::size_t i = 0; i < n; ++i) out[i] = a[i] && b[i];
        return out;
    case op::disjunction:
        for (std::size_t i = 0; i < n; ++i) out[i] = a[i] || b[i];
        return out;
    case op::implication:
        for (std::size_t i = 0; i < n; ++i) out[i] = !a[i] || b[i];
        return out;
    case op::until:
    case op::eventually: {
        // Least fixpoint of x = b ∨ (a ∧ X x).
        bits x(n, false);
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t k = n; k-- > 0;) {
                const bool v = b[k] || (a[k] && x[next(k)]);
                if (v != x[k]) x[k] = v, changed = true;
            }
        }
        return x;
    }
    case op::release:
    case op::always: {
        // Greatest fixpoint of x = b ∧ (a ∨ X x); for G the left side is false.
        bits x(n, true);
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t k = n; k-- > 0;) {
                const bool v = b[k] && (a[k] || x[next(k)]);
                if (v != x[k]) x[k] = v, changed = true;
            }
        }
        return x;
    }
    default: throw std::logic_error("unhandled operator");
    }
}

} // namespace

bool oracle_holds(const ltl_formula& f, const std::vector<valuation>& stem, const std::vector<valuation>& loop) {
    if (loop.empty()) throw std::invalid_argument("lasso loop must be non-empty");
    std::vector<valuation> word = stem;
    word.insert(word.end(), loop.begin(), loop.end());
    return eval_positions(f, word, stem.size())[0];
}

bool oracle_accepts(const buchi_automaton& a, const std::vector<valuation>& stem, const std::vector<valuation>& loop) {
    std::vector<valuation> word = stem;
    word.insert(word.end(), loop.begin(), loop.end());
    const std::size_t n = word.size();
    const std::size_t loop_start = stem.size();
    auto node = [&](std::size_t q, std::size_t pos) { return q * n + pos; };
    const std::size_t total = a.state_count * n;
    std::vector<std::vector<std::size_t>> succ(total);
    for (const auto& e : a.edges) {
        for (std::size_t pos = 0; pos < n; ++pos) {
            if (e.guard.eval(word[pos])) succ[node(e.from, pos)].push_back(node(e.to, pos + 1 < n ? pos + 1 : loop_start));
        }
    }
    auto reach_from = [&](std::vector<std::size_t> frontier) {
        std::vector<bool> seen(total, false);
        while (!frontier.empty()) {
            const auto v = frontier.back();
            frontier.pop_back();
            for (auto w : succ[v]) {
                if (!seen[w]) {
                    seen[w] = true;
                    frontier.push_back(w);
                }
            }
        }
        return seen;
    };
    std::vector<std::size_t> starts;
    for (auto q : a.initial) starts.push_back(node(q, 0));
    auto reachable = reach_from(starts);
    for (auto s : starts) reachable[s] = true;
    for (std::size_t v = 0; v < total; ++v) {
        if (!reachable[v] || !a.accepting[v / n]) continue;
        if (reach_from({v})[v]) return true;
    }
    return false;
}

// ---- random instances ----

namespace {

std::size_t pick(rng& r, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(r); }
bool coin(rng& r, double p = 0.5) { return std::bernoulli_distribution(p)(r); }

} // namespace

ltl_formula random_ltl(rng& r, const std::vector<std::string>& atoms, std::size_t max_nodes) {
    using op = ltl_formula::op;
    if (max_nodes <= 1 || coin(r, 0.25)) {
        const auto k = pick(r, atoms.size() + 2);
        if (k == atoms.size()) return ltl_formula::top();
        if (k == atoms.size() + 1) return ltl_formula::bottom();
        return ltl_formula::atom(atoms[k]);
    }
    if (max_nodes == 2 || coin(r)) {
        static const op unary[] = {op::negation, op::next, op::eventually, op::always};
        return ltl_formula::unary(unary[pick(r, 4)], random_ltl(r, atoms, max_nodes - 1));
    }
    static const op binary[] = {op::conjunction, op::disjunction, op::implication, op::until, op::release};
    const auto left = 1 + pick(r, max_nodes - 2);
    return ltl_formula::binary(binary[pick(r, 5)], random_ltl(r, atoms, left), random_ltl(r, atoms, max_nodes - 1 - left));
}

formula random_formula(rng& r, const std::vector<std::string>& atoms, std::size_t depth) {
    if (depth == 0 || coin(r, 0.3)) {
        const auto k = pick(r, atoms.size() + 1);
        return k == atoms.size() ? formula::top() : formula::atom(atoms[k]);
    }
    switch (pick(r, 3)) {
    case 0: return formula::negation(random_formula(r, atoms, depth - 1));
    case 1: return formula::conjunction({random_formula(r, atoms, depth - 1), random_formula(r, atoms, depth - 1)});
    default: return formula::disjunction({random_formula(r, atoms, depth - 1), random_formula(r, atoms, depth - 1)});
    }
}

valuation random_valuation(rng& r, const std::vector<std::string>& atoms) {
    valuation v;
    for (const auto& a : atoms) {
        if (coin(r)) v.insert(a);
    }
    return v;
}

model random_model(rng& r, std::size_t max_states, const std::vector<std::string>& actions,
                   const std::vector<std::string>& labels) {
    model m;
    m.action_props = {actions.begin(), actions.end()};
    m.label_props = {labels.begin(), labels.end()};
    m.label_props.insert(std::string(goal_prop));
    const auto n = 1 + pick(r, max_states);
    for (std::size_t i = 0; i < n; ++i) m.states.push_back("p" + std::to_string(i));
    m.initial = "p0";
    std::vector<std::string> guard_atoms(actions.begin(), actions.end());
    guard_atoms.push_back(std::string(eps_prop));
    std::vector<std::string> all_labels(m.label_props.begin(), m.label_props.end());
    for (const auto& s : m.states) {
        m.labels[s] = random_valuation(r, all_labels);
        const auto edges = 1 + pick(r, 2);
        std::vector<formula> guards;
        for (std::size_t k = 0; k < edges; ++k) {
            auto g = random_formula(r, guard_atoms, 2);
            if (!satisfiable(g)) g = formula::top();
            guards.push_back(g);
            m.transitions.push_back({s, g, m.states[pick(r, n)]});
        }
        // Usually complete, so runs rarely get stuck.
        if (coin(r, 0.8)) {
            const auto rest = f_not(formula::disjunction(guards));
            if (satisfiable(rest)) m.transitions.push_back({s, simplify(rest), s});
        }
    }
    return m;
}

controller random_controller(rng& r, std::size_t max_states, const std::vector<std::string>& props,
                             const std::vector<std::string>& actions) {
    controller c = absorbing_only("abs");
    c.props = {props.begin(), props.end()};
    c.actions = {actions.begin(), actions.end()};
    const auto n = pick(r, max_states);   // plus the absorbing state
    std::vector<controller_state> states;
    for (std::size_t i = 0; i < n; ++i) states.push_back({"c" + std::to_string(i), std::nullopt});
    states.push_back(c.states.front());
    c.states = states;
    c.initial = c.states.front().id;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& from = c.states[i].id;
        const auto edges = 1 + pick(r, 2);
        std::vector<formula> conds;
        for (std::size_t k = 0; k < edges; ++k) {
            auto cond = random_formula(r, props, 2);
            if (!satisfiable(cond)) cond = formula::top();
            action_set out;
            if (coin(r, 0.6)) out.insert(actions[pick(r, actions.size())]);
            conds.push_back(cond);
            c.transitions.push_back({from, cond, out, c.states[pick(r, c.states.size())].id});
        }
        if (coin(r, 0.7)) {
            const auto rest = f_not(formula::disjunction(conds));
            if (satisfiable(rest)) c.transitions.push_back({from, simplify(rest), {}, from});
        }
    }
    c.normalize();
    return c;
}

check_instance random_check_instance(rng& r) {
    const std::vector<std::string> actions = {"a", "b"};
    const std::vector<std::string> labels = {"x", "y"};
    auto m = random_model(r, 6, actions, labels);
    auto c = random_controller(r, 6, labels, actions);
    auto spec = random_ltl(r, {"x", "goal", "a"}, 6);
    return {std::move(m), std::move(c), std::move(spec)};
}

std::pair<std::size_t, std::size_t> oracle_bounds(const product& p, const verdict& v, std::size_t cap) {
    std::size_t stem = std::min(p.states.size(), cap);
    std::size_t loop = stem;
    if (v.cex) {
        stem = std::max(stem, v.cex->stem.size());
        loop = std::max(loop, v.cex->loop.size());
    }
    return {stem, loop};
}

} // namespace taskfsa::testing
