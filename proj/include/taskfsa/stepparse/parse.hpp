#pragma once

#include "taskfsa/core/controller.hpp"
#include "taskfsa/core/errors.hpp"
#include "taskfsa/stepparse/tagger.hpp"

#include <optional>
#include <string>
#include <vector>

namespace taskfsa {

class no_verb_found : public error {
public:
    using error::error;
};

enum class phrase_kind { condition, action };

struct verb_phrase {
    std::vector<std::string> lemmas;
    phrase_kind kind;

    [[nodiscard]] std::string id() const;
    friend bool operator==(const verb_phrase&, const verb_phrase&) = default;
};

struct extracted_phrases {
    std::vector<verb_phrase> conditions;
    std::vector<verb_phrase> actions;
    std::vector<std::string> keywords;
    std::vector<std::string> step_refs;
};

enum class rule_kind { default_rule, direct, conditional, conditional_else, self_wait, self_until };

[[nodiscard]] std::string_view rule_name(rule_kind r);
[[nodiscard]] rule_kind rule_from_name(std::string_view name);

// One guarded outcome of a step. A hold condition makes the step wait in place:
// for "wait" the outputs fire once it holds, for "until" they repeat until it holds.
struct step_branch {
    formula guard = formula::top();
    std::optional<formula> hold;
    bool hold_is_until = false;
    std::vector<action_set> outputs;   // alternatives; empty means the no-op output
    std::optional<std::string> target;

    friend bool operator==(const step_branch&, const step_branch&) = default;
};

struct parsed_step {
    std::string step_number;
    std::string text;
    rule_kind rule = rule_kind::default_rule;
    formula conds = formula::top();
    action_set acts;
    std::vector<std::string> keywords;
    std::optional<std::string> direct_target;
    std::vector<step_branch> branches;
    // Set by parse_steps: this if-step and the next form one if/else state.
    bool pairs_with_next = false;
    std::vector<std::string> notes;   // ambiguity and resolution records

    friend bool operator==(const parsed_step&, const parsed_step&) = default;
};

class step_parser {
public:
    explicit step_parser(const tagger& t = default_tagger()) : _tagger(&t) {}

    [[nodiscard]] extracted_phrases extract_phrases(std::string_view sentence) const;
    [[nodiscard]] parsed_step parse_step(std::string_view step_number, std::string_view sentence) const;

    [[nodiscard]] static const tagger& default_tagger();

private:
    const tagger* _tagger;
};

[[nodiscard]] extracted_phrases extract_phrases(std::string_view sentence);
[[nodiscard]] parsed_step parse_step(std::string_view step_number, std::string_view sentence);

// Parses a run of sibling steps and marks consecutive if-steps whose
// conditions are complementary as one if/else pair.
[[nodiscard]] std::vector<parsed_step> parse_steps(const std::vector<std::pair<std::string, std::string>>& steps);
void pair_complementary_steps(std::vector<parsed_step>& steps);

[[nodiscard]] bool valid_step_number(std::string_view number);

} // namespace taskfsa
