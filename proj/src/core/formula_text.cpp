#include "taskfsa/core/errors.hpp"
#include "taskfsa/core/formula.hpp"
#include "taskfsa/core/text_lexer.hpp"

#include <cctype>

namespace taskfsa {

std::string atom_to_identifier(std::string_view name) {
    std::string out(name);
    for (char& c : out) {
        if (c == ' ') c = '_';
    }
    return out;
}

std::string identifier_to_atom(std::string_view ident) {
    std::string out(ident);
    for (char& c : out) {
        if (c == '_') c = ' ';
    }
    return out;
}

namespace {

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool needs_quotes(const std::string& name) {
    if (name.empty() || name == "true" || name == "false") return true;
    for (char c : name) {
        if (!ident_char(c) && c != ' ') return true;
        if (c == '_') return true;
    }
    return name.front() == ' ' || name.back() == ' ' || name.find("  ") != std::string::npos;
}

} // namespace

std::vector<text_token> lex_formula_text(std::string_view text) {
    using k = text_token::kind;
    std::vector<text_token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (ident_char(c)) {
            while (i < text.size() && ident_char(text[i])) ++i;
            out.push_back({k::ident, std::string(text.substr(start, i - start)), start});
        } else if (c == '"') {
            const auto close = text.find('"', i + 1);
            if (close == std::string_view::npos) throw syntax_error("unterminated quoted atom", start);
            out.push_back({k::quoted, std::string(text.substr(i + 1, close - i - 1)), start});
            i = close + 1;
        } else if (c == '!' || c == '~') {
            out.push_back({k::bang, "!", start});
            ++i;
        } else if (c == '&') {
            i += (i + 1 < text.size() && text[i + 1] == '&') ? 2 : 1;
            out.push_back({k::amp, "&", start});
        } else if (c == '|') {
            i += (i + 1 < text.size() && text[i + 1] == '|') ? 2 : 1;
            out.push_back({k::bar, "|", start});
        } else if (text.substr(i, 2) == "->") {
            out.push_back({k::arrow, "->", start});
            i += 2;
        } else if (text.substr(i, 3) == "<->") {
            out.push_back({k::iff, "<->", start});
            i += 3;
        } else if (c == '(') {
            out.push_back({k::lparen, "(", start});
            ++i;
        } else if (c == ')') {
            out.push_back({k::rparen, ")", start});
            ++i;
        } else {
            throw syntax_error(std::string("unexpected character '") + c + "'", start);
        }
    }
    out.push_back({k::end, "", text.size()});
    return out;
}

namespace {

class prop_parser {
public:
    explicit prop_parser(std::string_view text) : _tokens(lex_formula_text(text)) {}

    formula parse() {
        formula f = implication();
        expect(text_token::kind::end, "end of input");
        return f;
    }

private:
    using k = text_token::kind;

    const text_token& peek() const { return _tokens[_pos]; }
    const text_token& next() { return _tokens[_pos++]; }

    void expect(k kind, const char* what) {
        if (peek().type != kind) {
            throw syntax_error(std::string("expected ") + what, peek().position);
        }
        ++_pos;
    }

    formula implication() {
        formula lhs = disjunction();
        if (peek().type == k::arrow) {
            next();
            return f_or(f_not(lhs), implication());
        }
        if (peek().type == k::iff) {
            next();
            formula rhs = implication();
            return f_or(f_and(lhs, rhs), f_and(f_not(lhs), f_not(rhs)));
        }
        return lhs;
    }

    formula disjunction() {
        std::vector<formula> items{conjunction()};
        while (peek().type == k::bar) {
            next();
            items.push_back(conjunction());
        }
        return formula::disjunction(std::move(items));
    }

    formula conjunction() {
        std::vector<formula> items{unary()};
        while (peek().type == k::amp) {
            next();
            items.push_back(unary());
        }
        return formula::conjunction(std::move(items));
    }

    formula unary() {
        if (peek().type == k::bang) {
            next();
            return formula::negation(unary());
        }
        const text_token& t = next();
        switch (t.type) {
        case k::ident:
            if (t.text == "true" || t.text == "True") return formula::top();
            if (t.text == "false" || t.text == "False") return formula::bottom();
            return formula::atom(identifier_to_atom(t.text));
        case k::quoted:
            if (t.text.empty()) throw syntax_error("empty quoted atom", t.position);
            return formula::atom(t.text);
        case k::lparen: {
            formula inner = implication();
            expect(k::rparen, "')'");
            return inner;
        }
        default:
            throw syntax_error("expected proposition, '!' or '('", t.position);
        }
    }

    std::vector<text_token> _tokens;
    std::size_t _pos = 0;
};

struct style {
    const char* top;
    const char* bottom;
    const char* neg;
    const char* conj;
    const char* disj;
    bool underscores;
};

constexpr style text_style{"true", "false", "!", " & ", " | ", true};
constexpr style display_style{"True", "False", "\xC2\xAC", " \xE2\x88\xA7 ", " \xE2\x88\xA8 ", false};

std::string render(const formula& f, const style& st);

std::string render_child(const formula& child, formula::kind parent, const style& st) {
    const auto t = child.type();
    const bool compound = (t == formula::kind::conjunction || t == formula::kind::disjunction) &&
                          !child.is_false();
    bool wrap = false;
    if (parent == formula::kind::negation) wrap = compound;
    if (parent == formula::kind::conjunction) wrap = compound;
    if (parent == formula::kind::disjunction) wrap = t == formula::kind::disjunction && compound;
    std::string s = render(child, st);
    return wrap ? "(" + s + ")" : s;
}

std::string render(const formula& f, const style& st) {
    switch (f.type()) {
    case formula::kind::truth:
        return st.top;
    case formula::kind::atom:
        if (!st.underscores) return f.name();
        return needs_quotes(f.name()) ? "\"" + f.name() + "\"" : atom_to_identifier(f.name());
    case formula::kind::negation:
        return st.neg + render_child(f.children().front(), formula::kind::negation, st);
    default: {
        if (f.is_false()) return st.bottom;
        const char* sep = f.type() == formula::kind::conjunction ? st.conj : st.disj;
        std::string out;
        for (std::size_t i = 0; i < f.children().size(); ++i) {
            if (i) out += sep;
            out += render_child(f.children()[i], f.type(), st);
        }
        return out;
    }
    }
}

} // namespace

formula parse_formula(std::string_view text) { return prop_parser(text).parse(); }

std::string to_text(const formula& f) { return render(f, text_style); }

std::string to_display(const formula& f) { return render(f, display_style); }

} // namespace taskfsa
