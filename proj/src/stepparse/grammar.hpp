#pragma once

#include "taskfsa/stepparse/parse.hpp"

#include <optional>
#include <span>
#include <vector>

namespace taskfsa::grammar {

using tokens = std::span<const token>;

// A condition built from one clause, with the phrases that produced it.
struct condition_result {
    formula f = formula::top();
    std::vector<verb_phrase> phrases;
};

// Outer vector: alternatives joined by "or"; inner: phrases joined by "and".
using action_alternatives = std::vector<std::vector<verb_phrase>>;

struct clause {
    enum class kind { plain, conditional, hold };
    kind k = kind::plain;
    std::optional<formula> guard;
    std::optional<formula> hold;
    bool hold_is_until = false;
    action_alternatives actions;
    std::optional<std::string> target;
    std::vector<verb_phrase> condition_phrases;
    std::vector<std::string> notes;
};

[[nodiscard]] condition_result read_condition(tokens ts);
[[nodiscard]] action_alternatives read_actions(tokens ts);
[[nodiscard]] clause analyze(tokens ts);

// Splits a sentence at sentence-final punctuation into fragments.
[[nodiscard]] std::vector<std::vector<token>> split_fragments(const std::vector<token>& ts);

} // namespace taskfsa::grammar
