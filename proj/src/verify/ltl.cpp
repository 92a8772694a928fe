#include "taskfsa/verify/ltl.hpp"

#include "taskfsa/core/errors.hpp"
#include "taskfsa/core/text_lexer.hpp"

#include <functional>

namespace taskfsa {

struct ltl_formula::node {
    op type;
    std::string name;
    std::vector<ltl_formula> kids;
};

ltl_formula::ltl_formula(std::shared_ptr<const node> n) : _node(std::move(n)) {}

ltl_formula ltl_formula::top() { return ltl_formula(std::make_shared<const node>(node{op::truth, {}, {}})); }
ltl_formula ltl_formula::bottom() { return ltl_formula(std::make_shared<const node>(node{op::falsity, {}, {}})); }

ltl_formula ltl_formula::atom(std::string name) {
    return ltl_formula(std::make_shared<const node>(node{op::atom, std::move(name), {}}));
}

ltl_formula ltl_formula::unary(op o, ltl_formula a) {
    return ltl_formula(std::make_shared<const node>(node{o, {}, {std::move(a)}}));
}

ltl_formula ltl_formula::binary(op o, ltl_formula a, ltl_formula b) {
    return ltl_formula(std::make_shared<const node>(node{o, {}, {std::move(a), std::move(b)}}));
}

ltl_formula::op ltl_formula::type() const noexcept { return _node->type; }
const std::string& ltl_formula::name() const noexcept { return _node->name; }
const ltl_formula& ltl_formula::lhs() const { return _node->kids.at(0); }
const ltl_formula& ltl_formula::rhs() const { return _node->kids.at(1); }
std::size_t ltl_formula::arity() const noexcept { return _node->kids.size(); }

std::size_t ltl_formula::size() const {
    std::size_t n = 1;
    for (const auto& k : _node->kids) n += k.size();
    return n;
}

std::set<std::string> ltl_formula::atoms() const {
    std::set<std::string> out;
    std::function<void(const ltl_formula&)> walk = [&](const ltl_formula& f) {
        if (f.type() == op::atom) out.insert(f.name());
        for (const auto& k : f._node->kids) walk(k);
    };
    walk(*this);
    return out;
}

bool operator==(const ltl_formula& a, const ltl_formula& b) {
    if (a._node == b._node) return true;
    if (a.type() != b.type() || a.name() != b.name() || a.arity() != b.arity()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i) {
        if (!(a._node->kids[i] == b._node->kids[i])) return false;
    }
    return true;
}

ltl_formula ltl_not(ltl_formula a) { return ltl_formula::unary(ltl_formula::op::negation, std::move(a)); }

namespace {

using op = ltl_formula::op;
using tk = text_token::kind;

class ltl_parser {
public:
    explicit ltl_parser(std::string_view text) : _t(lex_formula_text(text)) {}

    ltl_formula parse() {
        ltl_formula f = implication();
        if (peek().type != tk::end) throw syntax_error("unexpected '" + peek().text + "'", peek().position);
        return f;
    }

private:
    const text_token& peek(std::size_t k = 0) const { return _t[std::min(_pos + k, _t.size() - 1)]; }

    bool is_word(const text_token& t, const char* w) const { return t.type == tk::ident && t.text == w; }

    // A bare X/F/G is an operator only when an operand follows it.
    bool starts_operand(const text_token& t) const {
        if (t.type == tk::bang || t.type == tk::lparen || t.type == tk::quoted) return true;
        return t.type == tk::ident && !(t.text == "U" || t.text == "R");
    }

    ltl_formula implication() {
        ltl_formula lhs = disjunction();
        if (peek().type == tk::arrow) {
            ++_pos;
            return ltl_formula::binary(op::implication, lhs, implication());
        }
        if (peek().type == tk::iff) {
            ++_pos;
            ltl_formula rhs = implication();
            return ltl_formula::binary(op::conjunction, ltl_formula::binary(op::implication, lhs, rhs),
                                       ltl_formula::binary(op::implication, rhs, lhs));
        }
        return lhs;
    }

    ltl_formula disjunction() {
        ltl_formula f = conjunction();
        while (peek().type == tk::bar) {
            ++_pos;
            f = ltl_formula::binary(op::disjunction, f, conjunction());
        }
        return f;
    }

    ltl_formula conjunction() {
        ltl_formula f = temporal();
        while (peek().type == tk::amp) {
            ++_pos;
            f = ltl_formula::binary(op::conjunction, f, temporal());
        }
        return f;
    }

    ltl_formula temporal() {
        ltl_formula f = unary();
        if (is_word(peek(), "U") || is_word(peek(), "R")) {
            const op o = peek().text == "U" ? op::until : op::release;
            ++_pos;
            return ltl_formula::binary(o, f, temporal());
        }
        return f;
    }

    ltl_formula unary() {
        const text_token& t = peek();
        if (t.type == tk::bang) {
            ++_pos;
            return ltl_not(unary());
        }
        if (t.type == tk::ident && (t.text == "X" || t.text == "F" || t.text == "G") && starts_operand(peek(1))) {
            ++_pos;
            const op o = t.text == "X" ? op::next : t.text == "F" ? op::eventually : op::always;
            return ltl_formula::unary(o, unary());
        }
        return primary();
    }

    ltl_formula primary() {
        const text_token& t = _t[_pos];
        switch (t.type) {
        case tk::ident:
            ++_pos;
            if (t.text == "true" || t.text == "TRUE") return ltl_formula::top();
            if (t.text == "false" || t.text == "FALSE") return ltl_formula::bottom();
            if (t.text == "U" || t.text == "R") throw syntax_error("missing left operand of " + t.text, t.position);
            return ltl_formula::atom(identifier_to_atom(t.text));
        case tk::quoted:
            ++_pos;
            if (t.text.empty()) throw syntax_error("empty quoted atom", t.position);
            return ltl_formula::atom(t.text);
        case tk::lparen: {
            ++_pos;
            ltl_formula inner = implication();
            if (peek().type != tk::rparen) throw syntax_error("expected ')'", peek().position);
            ++_pos;
            return inner;
        }
        default:
            throw syntax_error(t.type == tk::end ? "unexpected end of formula" : "unexpected '" + t.text + "'",
                               t.position);
        }
    }

    std::vector<text_token> _t;
    std::size_t _pos = 0;
};

int precedence(op o) {
    switch (o) {
    case op::implication: return 1;
    case op::disjunction: return 2;
    case op::conjunction: return 3;
    case op::until:
    case op::release: return 4;
    case op::negation:
    case op::next:
    case op::eventually:
    case op::always: return 5;
    default: return 6;
    }
}

std::string atom_text(const std::string& name) {
    bool plain = !name.empty();
    for (char c : name) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == ' ')) plain = false;
    }
    if (name == "X" || name == "F" || name == "G" || name == "U" || name == "R" || name == "true" ||
        name == "false" || name == "TRUE" || name == "FALSE" || name.front() == ' ' || name.back() == ' ' ||
        name.find("  ") != std::string::npos) {
        plain = false;
    }
    return plain ? atom_to_identifier(name) : "\"" + name + "\"";
}

std::string render(const ltl_formula& f) {
    auto wrap = [](const ltl_formula& child, int min_prec) {
        std::string s = render(child);
        return precedence(child.type()) < min_prec ? "(" + s + ")" : s;
    };
    switch (f.type()) {
    case op::truth: return "true";
    case op::falsity: return "false";
    case op::atom: return atom_text(f.name());
    case op::negation: return "!" + wrap(f.lhs(), 5);
    case op::next: return "X " + wrap(f.lhs(), 5);
    case op::eventually: return "F " + wrap(f.lhs(), 5);
    case op::always: return "G " + wrap(f.lhs(), 5);
    // Binary operators: left child must bind tighter (or equal for left-assoc), right child tighter for right-assoc.
    case op::conjunction: return wrap(f.lhs(), 3) + " & " + wrap(f.rhs(), 4);
    case op::disjunction: return wrap(f.lhs(), 2) + " | " + wrap(f.rhs(), 3);
    case op::implication: return wrap(f.lhs(), 2) + " -> " + wrap(f.rhs(), 1);
    case op::until: return wrap(f.lhs(), 5) + " U " + wrap(f.rhs(), 4);
    case op::release: return wrap(f.lhs(), 5) + " R " + wrap(f.rhs(), 4);
    }
    return "";
}

ltl_formula nnf(const ltl_formula& f, bool negated) {
    using L = ltl_formula;
    switch (f.type()) {
    case op::truth: return negated ? L::bottom() : L::top();
    case op::falsity: return negated ? L::top() : L::bottom();
    case op::atom: return negated ? ltl_not(f) : f;
    case op::negation: return nnf(f.lhs(), !negated);
    case op::conjunction:
        return L::binary(negated ? op::disjunction : op::conjunction, nnf(f.lhs(), negated), nnf(f.rhs(), negated));
    case op::disjunction:
        return L::binary(negated ? op::conjunction : op::disjunction, nnf(f.lhs(), negated), nnf(f.rhs(), negated));
    case op::implication:
        return L::binary(negated ? op::conjunction : op::disjunction, nnf(f.lhs(), !negated), nnf(f.rhs(), negated));
    case op::next: return L::unary(op::next, nnf(f.lhs(), negated));
    case op::until:
        return L::binary(negated ? op::release : op::until, nnf(f.lhs(), negated), nnf(f.rhs(), negated));
    case op::release:
        return L::binary(negated ? op::until : op::release, nnf(f.lhs(), negated), nnf(f.rhs(), negated));
    case op::eventually:
        return negated ? L::binary(op::release, L::bottom(), nnf(f.lhs(), true))
                       : L::binary(op::until, L::top(), nnf(f.lhs(), false));
    case op::always:
        return negated ? L::binary(op::until, L::top(), nnf(f.lhs(), true))
                       : L::binary(op::release, L::bottom(), nnf(f.lhs(), false));
    }
    return f;
}

// Value of f at every position of stem·loop; the successor of the last position is the loop start.
std::vector<char> values(const ltl_formula& f, const std::vector<valuation>& word, std::size_t loop_start) {
    const std::size_t n = word.size();
    auto succ = [&](std::size_t i) { return i + 1 < n ? i + 1 : loop_start; };
    std::vector<char> out(n);
    switch (f.type()) {
    case op::truth: std::fill(out.begin(), out.end(), 1); return out;
    case op::falsity: return out;
    case op::atom:
        for (std::size_t i = 0; i < n; ++i) out[i] = word[i].contains(f.name());
        return out;
    case op::negation: {
        auto a = values(f.lhs(), word, loop_start);
        for (std::size_t i = 0; i < n; ++i) out[i] = !a[i];
        return out;
    }
    case op::conjunction:
    case op::disjunction:
    case op::implication: {
        auto a = values(f.lhs(), word, loop_start);
        auto b = values(f.rhs(), word, loop_start);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = f.type() == op::conjunction   ? (a[i] && b[i])
                     : f.type() == op::disjunction ? (a[i] || b[i])
                                                   : (!a[i] || b[i]);
        }
        return out;
    }
    case op::next: {
        auto a = values(f.lhs(), word, loop_start);
        for (std::size_t i = 0; i < n; ++i) out[i] = a[succ(i)];
        return out;
    }
    default: break;
    }

    // Until/release style: v = b | (a & v') as a least fixpoint, or v = b & (a | v') as a greatest one.
    std::vector<char> a, b;
    bool least = true;
    switch (f.type()) {
    case op::until: a = values(f.lhs(), word, loop_start); b = values(f.rhs(), word, loop_start); break;
    case op::eventually: a.assign(n, 1); b = values(f.lhs(), word, loop_start); break;
    case op::release: least = false; a = values(f.lhs(), word, loop_start); b = values(f.rhs(), word, loop_start); break;
    case op::always: least = false; a.assign(n, 0); b = values(f.lhs(), word, loop_start); break;
    default: throw std::logic_error("unhandled LTL operator");
    }
    std::fill(out.begin(), out.end(), least ? 0 : 1);
    auto step = [&](std::size_t i) {
        const bool nxt = out[succ(i)];
        out[i] = least ? (b[i] || (a[i] && nxt)) : (b[i] && (a[i] || nxt));
    };
    const std::size_t loop_len = n - loop_start;
    for (std::size_t round = 0; round <= loop_len; ++round) {
        for (std::size_t i = n; i-- > loop_start;) step(i);
    }
    for (std::size_t i = loop_start; i-- > 0;) step(i);
    return out;
}

} // namespace

ltl_formula parse_ltl(std::string_view text) { return ltl_parser(text).parse(); }

std::string to_text(const ltl_formula& f) { return render(f); }

ltl_formula ltl_nnf(const ltl_formula& f) { return nnf(f, false); }

bool eval_lasso(const ltl_formula& f, const std::vector<valuation>& stem, const std::vector<valuation>& loop) {
    if (loop.empty()) throw precondition_error("lasso loop must be non-empty");
    std::vector<valuation> word = stem;
    word.insert(word.end(), loop.begin(), loop.end());
    return values(f, word, stem.size())[0];
}

} // namespace taskfsa
