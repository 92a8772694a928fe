#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace taskfsa {

// Shared lexer for propositional and temporal formula text.
struct text_token {
    enum class kind { ident, quoted, bang, amp, bar, arrow, iff, lparen, rparen, end };
    kind type;
    std::string text;
    std::size_t position;
};

// Throws syntax_error on characters outside the grammar.
[[nodiscard]] std::vector<text_token> lex_formula_text(std::string_view text);

} // namespace taskfsa
