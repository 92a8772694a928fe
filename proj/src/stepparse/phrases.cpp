#include "grammar.hpp"

#include <algorithm>

namespace taskfsa::grammar {

namespace {

bool kw(const token& t, std::string_view w) { return t.tag == pos::KEYWORD && t.lemma == w; }
bool prep(const token& t, std::string_view w) { return t.tag == pos::PREP && t.lemma == w; }
bool comma(const token& t) { return t.tag == pos::PUNCT && (t.surface == "," || t.surface == ";" || t.surface == ":"); }
bool is_then(const token& t) { return t.tag == pos::ADV && t.lemma == "then"; }

bool clause_preposition(std::string_view w) {
    return w == "before" || w == "after" || w == "until" || w == "than" || w == "because" || w == "while" ||
           w == "unless" || w == "so";
}

bool light_verb(std::string_view w) {
    return w == "proceed" || w == "go" || w == "continue" || w == "try" || w == "begin" || w == "start" ||
           w == "remember" || w == "need" || w == "be";
}

// Consumes an NP and returns up to cap head nouns in order.
std::vector<std::string> read_np(tokens ts, std::size_t& i, std::size_t cap) {
    std::vector<std::string> nouns;
    while (i < ts.size()) {
        const auto& t = ts[i];
        if (t.tag == pos::DET || t.tag == pos::NUM || t.tag == pos::ADJ || t.tag == pos::OTHER) {
            ++i;
        } else if (t.tag == pos::N) {
            if (nouns.size() < cap) nouns.push_back(t.lemma);
            ++i;
        } else {
            break;
        }
    }
    return nouns;
}

// ts[i] is a verb. Reads verb + complement: a predicative adjective, a direct
// object NP, or a PP object when there is no direct object.
verb_phrase read_vp(tokens ts, std::size_t& i, phrase_kind kind) {
    verb_phrase vp{{ts[i].lemma}, kind};
    std::size_t j = i + 1;
    while (j < ts.size() && ts[j].tag == pos::ADV && !is_then(ts[j]) &&
           (j + 1 < ts.size() && (ts[j + 1].tag == pos::DET || ts[j + 1].tag == pos::N || ts[j + 1].tag == pos::ADJ)))
        ++j;
    const auto n = ts.size();
    if (j < n && ts[j].tag == pos::ADJ && (j + 1 == n || (ts[j + 1].tag != pos::N && ts[j + 1].tag != pos::ADJ))) {
        vp.lemmas.push_back(ts[j].lemma);
        ++j;
    } else if (j < n && (ts[j].tag == pos::DET || ts[j].tag == pos::NUM || ts[j].tag == pos::ADJ || ts[j].tag == pos::N ||
                         ts[j].tag == pos::OTHER)) {
        auto k = j;
        const auto nouns = read_np(ts, k, 2);
        vp.lemmas.insert(vp.lemmas.end(), nouns.begin(), nouns.end());
        j = k;
    } else if (j < n && ts[j].tag == pos::PREP && !clause_preposition(ts[j].lemma) &&
               !(ts[j].lemma == "to" && j + 1 < n && ts[j + 1].tag == pos::V)) {
        auto k = j + 1;
        const auto nouns = read_np(ts, k, 2);
        if (!nouns.empty()) {
            vp.lemmas.insert(vp.lemmas.end(), nouns.begin(), nouns.end());
            j = k;
        }
    }
    i = j;
    return vp;
}

tokens trim(tokens ts) {
    while (!ts.empty() && ts.front().tag == pos::PUNCT) ts = ts.subspan(1);
    while (!ts.empty() && ts.back().tag == pos::PUNCT) ts = ts.first(ts.size() - 1);
    return ts;
}

std::vector<tokens> split_on(tokens ts, std::string_view keyword) {
    std::vector<tokens> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (kw(ts[i], keyword)) {
            parts.push_back(ts.subspan(start, i - start));
            start = i + 1;
        }
    parts.push_back(ts.subspan(start));
    return parts;
}

condition_result atomic_condition(tokens span) {
    bool negated = false;
    std::vector<token> rest;
    for (const auto& t : span) {
        if (kw(t, "no") || kw(t, "not"))
            negated = !negated;
        else if (t.tag != pos::PUNCT)
            rest.push_back(t);
    }
    const tokens ts(rest);
    const auto n = ts.size();
    std::size_t h = 0;
    while (h < n && ts[h].tag != pos::V && ts[h].tag != pos::AUX) ++h;

    bool existential = false;
    bool pronoun_subject = false;
    std::optional<std::string> subject;
    for (std::size_t i = 0; i < h; ++i) {
        if (ts[i].lemma == "there") existential = true;
        if (ts[i].tag == pos::PRON) pronoun_subject = true;
        if (ts[i].tag == pos::N) subject = ts[i].lemma;
    }
    if (pronoun_subject) subject.reset();

    std::vector<std::string> lemmas;
    if (h == n) {
        std::size_t i = 0;
        while (i < n && ts[i].tag != pos::N && ts[i].tag != pos::ADJ) ++i;
        if (i < n && ts[i].tag == pos::ADJ && (i + 1 == n || ts[i + 1].tag != pos::N)) {
            lemmas.push_back(ts[i].lemma);
        } else {
            lemmas = read_np(ts, i, 2);
        }
    } else if (ts[h].tag == pos::AUX) {
        std::size_t j = h + 1;
        while (j < n && (ts[j].tag == pos::AUX || ts[j].tag == pos::ADV)) ++j;
        if (existential) {
            std::optional<std::string> head;
            while (j < n && (ts[j].tag == pos::DET || ts[j].tag == pos::NUM || ts[j].tag == pos::ADJ ||
                             ts[j].tag == pos::N || ts[j].tag == pos::OTHER)) {
                if (ts[j].tag == pos::N) head = ts[j].lemma;
                ++j;
            }
            if (head) lemmas.push_back(*head);
            if (j < n && ts[j].tag == pos::V) {
                const auto vp = read_vp(ts, j, phrase_kind::condition);
                lemmas.insert(lemmas.end(), vp.lemmas.begin(), vp.lemmas.end());
            }
        } else if (j < n && ts[j].tag == pos::V) {
            if (subject) lemmas.push_back(*subject);
            const auto vp = read_vp(ts, j, phrase_kind::condition);
            lemmas.insert(lemmas.end(), vp.lemmas.begin(), vp.lemmas.end());
        } else if (j < n && ts[j].tag == pos::ADJ && (j + 1 == n || ts[j + 1].tag != pos::N)) {
            lemmas.push_back(ts[j].lemma);
        } else if (j < n) {
            lemmas = read_np(ts, j, 2);
        }
        if (lemmas.empty() && subject) lemmas.push_back(*subject);
    } else {
        const bool infinitival = h > 0 && prep(ts[h - 1], "to");
        auto j = h;
        const auto vp = read_vp(ts, j, phrase_kind::condition);
        if (subject && !infinitival) lemmas.push_back(*subject);
        lemmas.insert(lemmas.end(), vp.lemmas.begin(), vp.lemmas.end());
    }

    condition_result r;
    if (lemmas.empty()) return r;
    verb_phrase vp{lemmas, phrase_kind::condition};
    r.f = formula::atom(vp.id());
    if (negated) r.f = formula::negation(r.f);
    r.phrases.push_back(std::move(vp));
    return r;
}

bool perfect_aspect(tokens ts) {
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i].tag != pos::AUX || ts[i].lemma != "have") continue;
        auto j = i + 1;
        while (j < ts.size() && (ts[j].tag == pos::ADV || kw(ts[j], "not"))) ++j;
        if (j < ts.size() && ts[j].tag == pos::V) {
            std::string surface = ts[j].surface;
            std::transform(surface.begin(), surface.end(), surface.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            if (surface != ts[j].lemma) return true;
        }
    }
    return false;
}

std::optional<std::size_t> find_keyword(tokens ts, std::string_view w) {
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (kw(ts[i], w)) return i;
    return std::nullopt;
}

std::size_t find_comma(tokens ts, std::size_t from) {
    for (std::size_t i = from; i < ts.size(); ++i)
        if (comma(ts[i]) || is_then(ts[i])) return i;
    return ts.size();
}

// Index just past separators that introduce a follow-on clause.
std::size_t skip_connectives(tokens ts, std::size_t i) {
    while (i < ts.size() && (ts[i].tag == pos::PUNCT || is_then(ts[i]) || kw(ts[i], "and") || prep(ts[i], "before")))
        ++i;
    return i;
}

// Condition governed by "wait": "for NP to VP", "for NP", "until CLAUSE" or a duration.
// Sets end to the first token after the condition.
std::optional<condition_result> wait_condition(tokens ts, std::size_t j, std::size_t& end) {
    const auto n = ts.size();
    auto duration = [&](std::size_t k) -> std::optional<condition_result> {
        if (k + 1 < n && ts[k].tag == pos::NUM && ts[k + 1].tag == pos::N) {
            verb_phrase vp{{ts[k].lemma, ts[k + 1].lemma}, phrase_kind::condition};
            end = k + 2;
            return condition_result{formula::atom(vp.id()), {vp}};
        }
        return std::nullopt;
    };
    if (j < n && kw(ts[j], "until")) {
        std::size_t e = j + 1;
        while (e < n && !comma(ts[e]) && !is_then(ts[e]) && !prep(ts[e], "before")) ++e;
        end = e;
        return read_condition(ts.subspan(j + 1, e - j - 1));
    }
    if (j < n && prep(ts[j], "for")) {
        ++j;
        if (auto d = duration(j)) return d;
        auto k = j;
        while (k < n && (ts[k].tag == pos::DET || ts[k].tag == pos::ADJ || ts[k].tag == pos::N || ts[k].tag == pos::NUM ||
                         ts[k].tag == pos::OTHER || ts[k].tag == pos::PRON))
            ++k;
        if (k + 1 < n && prep(ts[k], "to") && ts[k + 1].tag == pos::V) {
            auto v = k + 1;
            auto vp = read_vp(ts, v, phrase_kind::condition);
            end = v;
            return condition_result{formula::atom(vp.id()), {vp}};
        }
        auto i = j;
        const auto nouns = read_np(ts, i, 2);
        end = std::max(i, j);
        if (nouns.empty()) return std::nullopt;
        verb_phrase vp{nouns, phrase_kind::condition};
        return condition_result{formula::atom(vp.id()), {vp}};
    }
    if (auto d = duration(j)) return d;
    end = j;
    return std::nullopt;
}

void absorb(clause& c, clause&& inner) {
    c.actions = std::move(inner.actions);
    c.target = std::move(inner.target);
    c.condition_phrases.insert(c.condition_phrases.end(), inner.condition_phrases.begin(),
                               inner.condition_phrases.end());
    c.notes.insert(c.notes.end(), inner.notes.begin(), inner.notes.end());
}

} // namespace

condition_result read_condition(tokens ts) {
    condition_result out;
    std::vector<formula> disjuncts;
    for (auto alt : split_on(trim(ts), "or")) {
        std::vector<formula> conjuncts;
        for (auto part : split_on(alt, "and")) {
            auto r = atomic_condition(part);
            if (r.phrases.empty()) continue;
            conjuncts.push_back(r.f);
            out.phrases.insert(out.phrases.end(), r.phrases.begin(), r.phrases.end());
        }
        if (!conjuncts.empty()) disjuncts.push_back(formula::conjunction(std::move(conjuncts)));
    }
    out.f = disjuncts.empty() ? formula::top() : formula::disjunction(std::move(disjuncts));
    return out;
}

action_alternatives read_actions(tokens ts) {
    action_alternatives alts(1);
    std::size_t i = 0;
    const auto n = ts.size();
    while (i < n) {
        if (ts[i].tag != pos::V) {
            if (!alts.back().empty()) break;
            ++i;
            continue;
        }
        if (light_verb(ts[i].lemma) && i + 2 < n && prep(ts[i + 1], "to") && ts[i + 2].tag == pos::V) {
            i += 2;
            continue;
        }
        alts.back().push_back(read_vp(ts, i, phrase_kind::action));
        while (i < n && ts[i].tag == pos::ADV && !is_then(ts[i])) ++i;
        auto k = i;
        bool joined = false;
        bool alternative = false;
        if (k < n && comma(ts[k])) {
            ++k;
            joined = true;
        }
        if (k < n && (kw(ts[k], "and") || kw(ts[k], "or"))) {
            alternative = kw(ts[k], "or");
            ++k;
            joined = true;
        }
        while (k < n && ts[k].tag == pos::ADV) {
            joined = joined || is_then(ts[k]);
            ++k;
        }
        if (!joined || k >= n || ts[k].tag != pos::V) break;
        if (alternative) alts.emplace_back();
        i = k;
    }
    if (alts.back().empty()) alts.pop_back();
    return alts;
}

clause analyze(tokens ts) {
    ts = trim(ts);
    clause c;
    const auto n = ts.size();
    const auto if_pos = find_keyword(ts, "if");
    if (if_pos) {
        const auto k = *if_pos;
        bool leading = true;
        for (std::size_t i = 0; i < k; ++i)
            if (ts[i].tag != pos::ADV && ts[i].tag != pos::PUNCT) leading = false;
        tokens cond_span;
        tokens main_span;
        if (leading) {
            const auto e = find_comma(ts, k + 1);
            cond_span = ts.subspan(k + 1, e - k - 1);
            main_span = ts.subspan(std::min(e, n));
            if (main_span.empty()) c.notes.push_back("if-clause without a main clause");
        } else {
            main_span = ts.first(k);
            cond_span = ts.subspan(k + 1);
        }
        auto cr = read_condition(cond_span);
        auto inner = analyze(main_span);
        c.k = clause::kind::conditional;
        c.guard = cr.f;
        c.condition_phrases = std::move(cr.phrases);
        if (inner.guard) {
            c.notes.push_back("ambiguous rule: nested if; conditions conjoined");
            c.guard = f_and(*c.guard, *inner.guard);
        }
        c.hold = inner.hold;
        c.hold_is_until = inner.hold_is_until;
        absorb(c, std::move(inner));
        return c;
    }

    const auto wait_pos = find_keyword(ts, "wait");
    const auto until_pos = find_keyword(ts, "until");
    auto after_pos = find_keyword(ts, "after");
    if (const auto once_pos = find_keyword(ts, "once"); once_pos && (!after_pos || *once_pos < *after_pos))
        after_pos = once_pos;
    if (!after_pos) {
        for (std::size_t i = 0; i < n; ++i)
            if (prep(ts[i], "after")) {
                after_pos = i;
                break;
            }
    }

    struct structural {
        std::size_t at;
        std::string_view name;
    };
    std::vector<structural> found;
    if (wait_pos) found.push_back({*wait_pos, "wait"});
    if (after_pos) found.push_back({*after_pos, "after"});
    if (until_pos && !(wait_pos && *until_pos == *wait_pos + 1)) found.push_back({*until_pos, "until"});
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.at < b.at; });
    if (found.size() > 1) {
        std::string names;
        for (const auto& f : found) names += std::string(names.empty() ? "" : ", ") + std::string(f.name);
        c.notes.push_back("ambiguous rule: " + names + "; first match wins");
    }
    const std::string_view first = found.empty() ? std::string_view{} : found.front().name;

    if (first == "after") {
        const auto k = found.front().at;
        tokens cond_span;
        tokens main_span;
        if (k == 0) {
            const auto e = find_comma(ts, 1);
            cond_span = ts.subspan(1, e - 1);
            main_span = ts.subspan(std::min(e, n));
        } else {
            main_span = ts.first(k);
            cond_span = ts.subspan(k + 1);
        }
        if (perfect_aspect(cond_span)) {
            auto inner = analyze(main_span);
            inner.notes.push_back("completed-action clause read as sequencing");
            return inner;
        }
        auto cr = read_condition(cond_span);
        auto inner = analyze(main_span);
        if (inner.hold || inner.guard) c.notes.push_back("ambiguous rule: nested condition under after/once ignored");
        c.k = clause::kind::hold;
        c.hold = cr.f;
        c.condition_phrases = std::move(cr.phrases);
        absorb(c, std::move(inner));
        return c;
    }

    if (first == "wait") {
        const auto k = found.front().at;
        std::size_t end = k + 1;
        auto cr = wait_condition(ts, k + 1, end);
        auto inner = analyze(ts.subspan(skip_connectives(ts, end)));
        const auto before = read_actions(ts.first(k));
        if (!before.empty()) {
            c.notes.push_back("actions before wait fire on release");
            if (inner.actions.empty()) inner.actions.emplace_back();
            for (auto& alt : inner.actions) alt.insert(alt.begin(), before.front().begin(), before.front().end());
        }
        absorb(c, std::move(inner));
        if (cr) {
            c.k = clause::kind::hold;
            c.hold = cr->f;
            c.condition_phrases.insert(c.condition_phrases.begin(), cr->phrases.begin(), cr->phrases.end());
        } else {
            c.notes.push_back("wait without a condition");
        }
        return c;
    }

    if (first == "until") {
        const auto k = found.front().at;
        auto cr = read_condition(ts.subspan(k + 1));
        auto inner = analyze(ts.first(k));
        absorb(c, std::move(inner));
        c.k = clause::kind::hold;
        c.hold = cr.f;
        c.hold_is_until = true;
        c.condition_phrases.insert(c.condition_phrases.begin(), cr.phrases.begin(), cr.phrases.end());
        return c;
    }

    for (const auto& t : ts)
        if (t.tag == pos::STEPREF) {
            c.target = t.lemma;
            return c;
        }
    c.actions = read_actions(ts);
    return c;
}

std::vector<std::vector<token>> split_fragments(const std::vector<token>& ts) {
    std::vector<std::vector<token>> out(1);
    for (const auto& t : ts) {
        if (t.tag == pos::PUNCT && (t.surface == "." || t.surface == "!" || t.surface == "?")) {
            if (!out.back().empty()) out.emplace_back();
            continue;
        }
        out.back().push_back(t);
    }
    if (out.back().empty()) out.pop_back();
    return out;
}

} // namespace taskfsa::grammar
