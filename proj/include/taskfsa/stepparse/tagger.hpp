#pragma once

#include "taskfsa/stepparse/lexicon.hpp"

#include <set>
#include <string>
#include <vector>

namespace taskfsa {

struct token {
    std::string surface;
    std::string lemma;   // lowercase
    pos tag;
    std::size_t offset;  // byte offset in the sentence

    friend bool operator==(const token&, const token&) = default;
};

[[nodiscard]] const std::set<std::string>& default_keywords();

// Deterministic lexicon + context rule tagger. Stateless after construction.
class tagger {
public:
    explicit tagger(const lexicon& lex = lexicon::builtin(), std::set<std::string> keywords = default_keywords());

    [[nodiscard]] std::vector<token> tag(std::string_view sentence) const;
    [[nodiscard]] const lexicon& lex() const noexcept { return *_lex; }
    [[nodiscard]] bool is_keyword(std::string_view lower) const { return _keywords.contains(std::string(lower)); }

private:
    const lexicon* _lex;
    std::set<std::string> _keywords;
};

[[nodiscard]] std::vector<token> tokenize_and_tag(std::string_view sentence);

// Removes a leading "[1.2]" marker and surrounding whitespace.
[[nodiscard]] std::string strip_step_marker(std::string_view sentence);

} // namespace taskfsa
