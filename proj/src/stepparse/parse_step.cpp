#include "grammar.hpp"

#include <algorithm>
#include <array>
#include <regex>

namespace taskfsa {

namespace {

constexpr std::array<std::string_view, 6> rule_names = {"Default",         "Direct",   "Conditional",
                                                        "ConditionalElse", "SelfWait", "SelfUntil"};

std::vector<std::string> keywords_of(const std::vector<token>& ts) {
    std::vector<std::string> out;
    for (const auto& t : ts)
        if (t.tag == pos::KEYWORD && std::find(out.begin(), out.end(), t.lemma) == out.end()) out.push_back(t.lemma);
    return out;
}

action_set to_action_set(const std::vector<verb_phrase>& vps) {
    action_set out;
    for (const auto& vp : vps) out.insert(vp.id());
    return out;
}

step_branch to_branch(const grammar::clause& c) {
    step_branch b;
    if (c.guard) b.guard = *c.guard;
    b.hold = c.hold;
    b.hold_is_until = c.hold_is_until;
    for (const auto& alt : c.actions) b.outputs.push_back(to_action_set(alt));
    b.target = c.target;
    return b;
}

bool empty_branch(const step_branch& b) {
    return b.guard.is_true() && !b.hold && !b.target &&
           std::all_of(b.outputs.begin(), b.outputs.end(), [](const auto& o) { return o.empty(); });
}

} // namespace

std::string verb_phrase::id() const {
    std::string out;
    for (const auto& l : lemmas) {
        if (!out.empty()) out += ' ';
        out += l;
    }
    return out;
}

std::string_view rule_name(rule_kind r) { return rule_names.at(static_cast<std::size_t>(r)); }

rule_kind rule_from_name(std::string_view name) {
    for (std::size_t i = 0; i < rule_names.size(); ++i)
        if (rule_names[i] == name) return static_cast<rule_kind>(i);
    throw precondition_error("unknown rule: " + std::string(name));
}

bool valid_step_number(std::string_view number) {
    static const std::regex re(R"(\d+(\.\d+)*)");
    return std::regex_match(number.begin(), number.end(), re);
}

const tagger& step_parser::default_tagger() {
    static const tagger t;
    return t;
}

extracted_phrases step_parser::extract_phrases(std::string_view sentence) const {
    const auto ts = _tagger->tag(strip_step_marker(sentence));
    extracted_phrases out;
    out.keywords = keywords_of(ts);
    for (const auto& t : ts)
        if (t.tag == pos::STEPREF) out.step_refs.push_back(t.lemma);
    for (const auto& frag : grammar::split_fragments(ts)) {
        const auto c = grammar::analyze(frag);
        out.conditions.insert(out.conditions.end(), c.condition_phrases.begin(), c.condition_phrases.end());
        for (const auto& alt : c.actions) out.actions.insert(out.actions.end(), alt.begin(), alt.end());
    }
    if (out.conditions.empty() && out.actions.empty() && out.step_refs.empty())
        throw no_verb_found("no verb phrase in: " + std::string(sentence));
    return out;
}

parsed_step step_parser::parse_step(std::string_view step_number, std::string_view sentence) const {
    if (!valid_step_number(step_number))
        throw precondition_error("invalid step number: " + std::string(step_number));
    parsed_step ps;
    ps.step_number = std::string(step_number);
    ps.text = strip_step_marker(sentence);
    const auto ts = _tagger->tag(ps.text);
    ps.keywords = keywords_of(ts);

    std::vector<grammar::clause> clauses;
    for (const auto& frag : grammar::split_fragments(ts)) clauses.push_back(grammar::analyze(frag));
    for (const auto& c : clauses) ps.notes.insert(ps.notes.end(), c.notes.begin(), c.notes.end());

    const bool all_conditional =
        clauses.size() > 1 && std::all_of(clauses.begin(), clauses.end(),
                                          [](const auto& c) { return c.k == grammar::clause::kind::conditional; });
    if (all_conditional) {
        for (const auto& c : clauses) ps.branches.push_back(to_branch(c));
        std::vector<formula> guards;
        for (const auto& b : ps.branches) guards.push_back(b.guard);
        if (!valid(formula::disjunction(guards)))
            ps.notes.push_back("if/else branches do not cover every case; the rest waits in place");
    } else {
        // Plain fragments run together; the first structured fragment decides the shape.
        grammar::clause merged;
        bool have_structure = false;
        std::vector<verb_phrase> extra;
        for (auto& c : clauses) {
            const bool structured = c.k != grammar::clause::kind::plain || c.target.has_value();
            if (structured && !have_structure) {
                auto keep = merged.actions;
                merged = c;
                have_structure = true;
                for (const auto& alt : keep) extra.insert(extra.end(), alt.begin(), alt.end());
            } else {
                if (structured) ps.notes.push_back("ambiguous rule: several structured sentences; first match wins");
                for (const auto& alt : c.actions) extra.insert(extra.end(), alt.begin(), alt.end());
            }
        }
        if (!extra.empty()) {
            if (merged.actions.empty()) merged.actions.emplace_back();
            for (auto& alt : merged.actions) alt.insert(alt.end(), extra.begin(), extra.end());
        }
        if (clauses.size() > 1 && !merged.target) {
            // Ignore phrases repeated across sentences.
            for (auto& alt : merged.actions) {
                std::vector<verb_phrase> uniq;
                for (const auto& vp : alt)
                    if (std::find(uniq.begin(), uniq.end(), vp) == uniq.end()) uniq.push_back(vp);
                alt = std::move(uniq);
            }
        }
        ps.branches.push_back(to_branch(merged));
    }

    if (ps.branches.empty() || std::all_of(ps.branches.begin(), ps.branches.end(), empty_branch))
        throw no_verb_found("no verb phrase in step " + ps.step_number + ": " + ps.text);

    const auto& first = ps.branches.front();
    for (const auto& b : ps.branches)
        for (const auto& o : b.outputs) ps.acts.insert(o.begin(), o.end());
    ps.direct_target = first.target;
    if (all_conditional) {
        ps.rule = rule_kind::conditional_else;
        ps.conds = first.guard;
    } else if (!first.guard.is_true()) {
        ps.rule = rule_kind::conditional;
        ps.conds = first.guard;
    } else if (first.hold) {
        ps.rule = first.hold_is_until ? rule_kind::self_until : rule_kind::self_wait;
        ps.conds = *first.hold;
    } else if (first.target) {
        ps.rule = rule_kind::direct;
    } else {
        ps.rule = rule_kind::default_rule;
    }
    return ps;
}

extracted_phrases extract_phrases(std::string_view sentence) {
    return step_parser().extract_phrases(sentence);
}

parsed_step parse_step(std::string_view step_number, std::string_view sentence) {
    return step_parser().parse_step(step_number, sentence);
}

void pair_complementary_steps(std::vector<parsed_step>& steps) {
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
        auto& a = steps[i];
        auto& b = steps[i + 1];
        if (a.rule != rule_kind::conditional || b.rule != rule_kind::conditional) continue;
        if (a.branches.size() != 1 || b.branches.size() != 1) continue;
        if (!equivalent(b.branches.front().guard, f_not(a.branches.front().guard))) continue;
        a.rule = rule_kind::conditional_else;
        b.rule = rule_kind::conditional_else;
        a.pairs_with_next = true;
        ++i;
    }
}

std::vector<parsed_step> parse_steps(const std::vector<std::pair<std::string, std::string>>& steps) {
    std::vector<parsed_step> out;
    out.reserve(steps.size());
    for (const auto& [number, text] : steps) out.push_back(parse_step(number, text));
    pair_complementary_steps(out);
    return out;
}

} // namespace taskfsa
