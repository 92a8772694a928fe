#include "taskfsa/verify/smv.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace taskfsa {

namespace {

const std::set<std::string>& reserved_words() {
    static const std::set<std::string> words{
        "MODULE", "VAR", "IVAR", "FROZENVAR", "DEFINE", "ASSIGN", "INIT", "TRANS", "INVAR", "LTLSPEC",
        "SPEC", "CTLSPEC", "FAIRNESS", "JUSTICE", "COMPASSION", "boolean", "next", "init", "case", "esac",
        "TRUE", "FALSE", "X", "F", "G", "U", "V", "Y", "Z", "H", "O", "S", "T", "A", "E", "AX", "AF", "AG",
        "EX", "EF", "EG", "xor", "xnor", "mod", "in", "union", "self", "main", "word", "array", "of",
        "integer", "real", "process", "m", "c"};
    return words;
}

} // namespace

std::string smv_identifier(std::string_view name) {
    std::string out;
    for (char ch : name) {
        const auto u = static_cast<unsigned char>(ch);
        out += std::isalnum(u) ? static_cast<char>(std::tolower(u)) : '_';
    }
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front()))) out = "v_" + out;
    if (reserved_words().contains(out)) out += "_p";
    return out;
}

namespace {

// Assigns collision-free SMV names to propositions.
class name_table {
public:
    std::string add(const std::string& prop, const std::string& prefix = "") {
        auto it = _names.find(prop);
        if (it != _names.end()) return it->second;
        std::string base = prefix + smv_identifier(prop);
        std::string name = base;
        for (int i = 2; _used.contains(name); ++i) name = base + "_" + std::to_string(i);
        _used.insert(name);
        _names.emplace(prop, name);
        return name;
    }
    void reserve(const std::string& name) { _used.insert(name); }
    const std::string& at(const std::string& prop) const { return _names.at(prop); }
    bool contains(const std::string& prop) const { return _names.contains(prop); }

private:
    std::map<std::string, std::string> _names;
    std::set<std::string> _used{"m", "c"};
};

std::string ltl_to_smv(const ltl_formula& f, const name_table& names) {
    using op = ltl_formula::op;
    auto sub = [&](const ltl_formula& g) { return ltl_to_smv(g, names); };
    switch (f.type()) {
    case op::truth: return "TRUE";
    case op::falsity: return "FALSE";
    case op::atom: return names.at(f.name());
    case op::negation: return "!(" + sub(f.lhs()) + ")";
    case op::next: return "X (" + sub(f.lhs()) + ")";
    case op::eventually: return "F (" + sub(f.lhs()) + ")";
    case op::always: return "G (" + sub(f.lhs()) + ")";
    case op::conjunction: return "(" + sub(f.lhs()) + " & " + sub(f.rhs()) + ")";
    case op::disjunction: return "(" + sub(f.lhs()) + " | " + sub(f.rhs()) + ")";
    case op::implication: return "(" + sub(f.lhs()) + " -> " + sub(f.rhs()) + ")";
    case op::until: return "(" + sub(f.lhs()) + " U " + sub(f.rhs()) + ")";
    case op::release: return "(" + sub(f.lhs()) + " V " + sub(f.rhs()) + ")";
    }
    return "";
}

std::string disjunction_or_false(const std::vector<std::string>& parts) {
    if (parts.empty()) return "FALSE";
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += " | ";
        out += p;
    }
    return out;
}

} // namespace

std::string export_smv(const model& m, const controller& c, const std::optional<ltl_formula>& spec) {
    return spec ? export_smv(m, c, std::vector<ltl_formula>{*spec}) : export_smv(m, c, std::vector<ltl_formula>{});
}

std::string export_smv(const model& m, const controller& c, const std::vector<ltl_formula>& specs) {
    const product p = build_product(m, c);

    std::set<std::string> label_props(c.props.begin(), c.props.end());
    label_props.insert(m.label_props.begin(), m.label_props.end());
    label_props.erase(std::string(goal_prop));
    std::set<std::string> spec_atoms;
    for (const auto& f : specs) {
        const auto atoms = f.atoms();
        spec_atoms.insert(atoms.begin(), atoms.end());
    }

    name_table names;
    std::map<std::string, std::string> mvals, cvals;
    {
        name_table values;
        for (const auto& s : m.states) mvals[s] = values.add("m:" + s, "ms_");
        for (const auto& s : c.states) cvals[s.id] = values.add("c:" + s.id, "cs_");
        // Keep proposition names clear of state constants.
        for (const auto& [_, v] : mvals) names.reserve(v);
        for (const auto& [_, v] : cvals) names.reserve(v);
    }
    std::map<std::string, std::string> action_var;
    for (const auto& a : c.actions) action_var[a] = names.add(a, "act_");
    std::vector<std::string> define_order;
    for (const auto& l : label_props) {
        names.add(l);
        define_order.push_back(l);
    }
    names.add(std::string(goal_prop));
    define_order.push_back(std::string(goal_prop));
    for (const auto& a : spec_atoms) {
        if (!names.contains(a)) {
            names.add(a);
            define_order.push_back(a);
        }
    }

    std::ostringstream out;
    out << "-- controller x model product, reachable part\n";
    out << "MODULE main\n";
    out << "VAR\n";
    auto domain = [](const std::map<std::string, std::string>& vals, const auto& order) {
        std::string d;
        for (const auto& s : order) {
            if (!d.empty()) d += ", ";
            d += vals.at(s);
        }
        return d;
    };
    std::vector<std::string> cids;
    for (const auto& s : c.states) cids.push_back(s.id);
    out << "  m : {" << domain(mvals, m.states) << "};\n";
    out << "  c : {" << domain(cvals, cids) << "};\n";
    for (const auto& a : c.actions) out << "  " << action_var.at(a) << " : boolean;\n";

    out << "DEFINE\n";
    for (const auto& prop : define_order) {
        std::vector<std::string> holds;
        if (prop == stuck_prop) {
            for (const auto& e : p.edges) {
                if (e.stuck) {
                    holds.push_back("(m = " + mvals.at(p.states[e.from].model_state) + " & c = " +
                                    cvals.at(p.states[e.from].controller_state) + ")");
                }
            }
        } else {
            for (const auto& s : m.states) {
                if (m.label_of(s).contains(prop)) holds.push_back("m = " + mvals.at(s));
            }
        }
        out << "  " << names.at(prop) << " := " << disjunction_or_false(holds) << ";\n";
    }

    out << "INIT\n";
    out << "  m = " << mvals.at(m.initial) << " & c = " << cvals.at(c.initial) << ";\n";

    out << "TRANS\n";
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        const auto& e = p.edges[i];
        const auto& from = p.states[e.from];
        const auto& to = p.states[e.to];
        std::string clause = "(m = " + mvals.at(from.model_state) + " & c = " + cvals.at(from.controller_state);
        for (const auto& a : c.actions) clause += std::string(" & ") + (e.action.contains(a) ? "" : "!") + action_var.at(a);
        clause += " & next(m) = " + mvals.at(to.model_state) + " & next(c) = " + cvals.at(to.controller_state) + ")";
        out << (i == 0 ? "    " : "  | ") << clause << "\n";
    }
    out << "  ;\n";

    for (const auto& f : specs) {
        out << "LTLSPEC\n";
        out << "  " << ltl_to_smv(f, names) << ";\n";
    }
    return out.str();
}

namespace {

struct smv_token {
    enum class kind { ident, number, symbol, end } type;
    std::string text;
    std::size_t line;
};

std::vector<smv_token> smv_lex(std::string_view text, std::vector<std::string>& errors) {
    std::vector<smv_token> out;
    std::size_t line = 1;
    for (std::size_t i = 0; i < text.size();) {
        const char ch = text[i];
        if (ch == '\n') {
            ++line;
            ++i;
        } else if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
        } else if (text.substr(i, 2) == "--") {
            while (i < text.size() && text[i] != '\n') ++i;
        } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
            out.push_back({smv_token::kind::ident, std::string(text.substr(i, j - i)), line});
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            out.push_back({smv_token::kind::number, std::string(text.substr(i, j - i)), line});
            i = j;
        } else {
            static const char* multi[] = {"<->", ":=", "!=", "->"};
            bool matched = false;
            for (const char* sym : multi) {
                const std::string_view s(sym);
                if (text.substr(i, s.size()) == s) {
                    out.push_back({smv_token::kind::symbol, std::string(s), line});
                    i += s.size();
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            if (std::string_view("(){},;:=!&|").find(ch) != std::string_view::npos) {
                out.push_back({smv_token::kind::symbol, std::string(1, ch), line});
            } else {
                errors.push_back("line " + std::to_string(line) + ": unexpected character '" + std::string(1, ch) + "'");
            }
            ++i;
        }
    }
    out.push_back({smv_token::kind::end, "", line});
    return out;
}

class smv_checker {
public:
    explicit smv_checker(std::string_view text) { _t = smv_lex(text, _r.errors); }

    smv_report run() {
        try {
            program();
        } catch (const std::runtime_error& e) {
            _r.errors.push_back(e.what());
        }
        // Identifier resolution happens after all declarations are known.
        for (const auto& [name, line] : _uses) {
            if (!_vars.contains(name) && !_defines.contains(name) && !_constants.contains(name)) {
                _r.errors.push_back("line " + std::to_string(line) + ": undeclared identifier '" + name + "'");
            }
        }
        for (const auto& v : _next_args) {
            if (!_vars.contains(v)) _r.errors.push_back("next() applied to non-variable '" + v + "'");
        }
        for (const auto& [var, value, line] : _comparisons) {
            auto it = _vars.find(var);
            if (it != _vars.end() && !it->second.empty() && !it->second.contains(value) && !_defines.contains(value) &&
                !_vars.contains(value)) {
                _r.errors.push_back("line " + std::to_string(line) + ": '" + value + "' is not in the domain of " + var);
            }
        }
        _r.ok = _r.errors.empty();
        return _r;
    }

private:
    enum class ctx { plain, trans, ltl };

    [[noreturn]] void fail(const std::string& msg) {
        throw std::runtime_error("line " + std::to_string(peek().line) + ": " + msg);
    }
    const smv_token& peek() const { return _t[_pos]; }
    bool at(const char* s) const { return peek().text == s && peek().type != smv_token::kind::end; }
    void expect(const char* s) {
        if (!at(s)) fail(std::string("expected '") + s + "' but found '" + peek().text + "'");
        ++_pos;
    }
    std::string ident() {
        if (peek().type != smv_token::kind::ident) fail("expected identifier but found '" + peek().text + "'");
        return _t[_pos++].text;
    }
    bool section_start() const {
        static const std::set<std::string> s{"VAR", "DEFINE", "INIT", "TRANS", "LTLSPEC", "MODULE"};
        return peek().type == smv_token::kind::ident && s.contains(peek().text);
    }
    void declare(const std::string& name) {
        if (reserved_words().contains(name) && name != "m" && name != "c") fail("reserved word used as identifier: " + name);
        if (!_declared.insert(name).second) fail("duplicate declaration of '" + name + "'");
    }

    void program() {
        expect("MODULE");
        if (ident() != "main") fail("only MODULE main is supported");
        while (peek().type != smv_token::kind::end) {
            const std::string section = ident();
            if (section == "VAR") {
                while (!section_start() && peek().type != smv_token::kind::end) var_decl();
            } else if (section == "DEFINE") {
                while (!section_start() && peek().type != smv_token::kind::end) define_decl();
            } else if (section == "INIT") {
                expr(ctx::plain);
                if (at(";")) ++_pos;
            } else if (section == "TRANS") {
                expr(ctx::trans);
                if (at(";")) ++_pos;
            } else if (section == "LTLSPEC") {
                expr(ctx::ltl);
                if (at(";")) ++_pos;
                ++_r.specs;
            } else {
                fail("unsupported section '" + section + "'");
            }
        }
    }

    void var_decl() {
        const std::string name = ident();
        declare(name);
        expect(":");
        std::set<std::string> domain;
        if (at("boolean")) {
            ++_pos;
        } else {
            expect("{");
            do {
                const std::string v = ident();
                if (!domain.insert(v).second) fail("duplicate value '" + v + "' in domain of " + name);
                _constants.insert(v);
            } while (at(",") && (++_pos, true));
            expect("}");
        }
        expect(";");
        _vars[name] = domain;
        ++_r.variables;
    }

    void define_decl() {
        const std::string name = ident();
        declare(name);
        expect(":=");
        expr(ctx::plain);
        expect(";");
        _defines.insert(name);
        ++_r.defines;
    }

    void expr(ctx c) { implication(c); }

    void implication(ctx c) {
        disjunction(c);
        if (at("->") || at("<->")) {
            ++_pos;
            implication(c);
        }
    }
    void disjunction(ctx c) {
        conjunction(c);
        while (at("|")) {
            ++_pos;
            conjunction(c);
        }
    }
    void conjunction(ctx c) {
        temporal(c);
        while (at("&")) {
            ++_pos;
            temporal(c);
        }
    }
    void temporal(ctx c) {
        equality(c);
        if (c == ctx::ltl && (at("U") || at("V"))) {
            ++_pos;
            temporal(c);
        }
    }
    void equality(ctx c) {
        const std::size_t start = _pos;
        std::optional<std::string> lhs_var = unary(c);
        if (at("=") || at("!=")) {
            ++_pos;
            const std::size_t rhs_at = _pos;
            unary(c);
            if (lhs_var && _pos == rhs_at + 1 && _t[rhs_at].type == smv_token::kind::ident) {
                _comparisons.push_back({*lhs_var, _t[rhs_at].text, _t[rhs_at].line});
            }
        }
        (void)start;
    }
    // Returns the variable name when the operand is a plain variable or next(variable).
    std::optional<std::string> unary(ctx c) {
        if (at("!")) {
            ++_pos;
            unary(c);
            return std::nullopt;
        }
        if (c == ctx::ltl && (at("X") || at("F") || at("G"))) {
            ++_pos;
            unary(c);
            return std::nullopt;
        }
        if (at("(")) {
            ++_pos;
            expr(c);
            expect(")");
            return std::nullopt;
        }
        if (at("next")) {
            if (c != ctx::trans) fail("next() is only allowed in TRANS");
            ++_pos;
            expect("(");
            const std::size_t line = peek().line;
            const std::string v = ident();
            expect(")");
            _uses.push_back({v, line});
            _next_args.push_back(v);
            return v;
        }
        if (at("TRUE") || at("FALSE")) {
            ++_pos;
            return std::nullopt;
        }
        if (peek().type == smv_token::kind::number) {
            ++_pos;
            return std::nullopt;
        }
        const std::size_t line = peek().line;
        const std::string v = ident();
        if (reserved_words().contains(v) && v != "m" && v != "c") fail("unexpected keyword '" + v + "'");
        _uses.push_back({v, line});
        return v;
    }

    std::vector<smv_token> _t;
    std::size_t _pos = 0;
    smv_report _r;
    std::set<std::string> _declared;
    std::map<std::string, std::set<std::string>> _vars;
    std::set<std::string> _defines;
    std::set<std::string> _constants;
    std::vector<std::pair<std::string, std::size_t>> _uses;
    std::vector<std::string> _next_args;
    std::vector<std::tuple<std::string, std::string, std::size_t>> _comparisons;
};

} // namespace

smv_report validate_smv(std::string_view text) { return smv_checker(text).run(); }

} // namespace taskfsa
