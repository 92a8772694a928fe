#include "taskfsa/stepparse/tagger.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <regex>

namespace taskfsa {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

bool is_number(std::string_view s) {
    if (s.empty() || !std::isdigit(static_cast<unsigned char>(s.front()))) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '.'; });
}

const std::regex& step_ref_regex() {
    static const std::regex re(R"(^\[(\d+(?:\.\d+)*)\])");
    return re;
}

constexpr std::string_view punct_chars = ",.;:!?";
constexpr std::string_view drop_chars = "\"'()";

bool starts_with_any(std::string_view s, std::initializer_list<std::string_view> prefixes, std::size_t& len) {
    for (auto p : prefixes)
        if (s.starts_with(p)) {
            len = p.size();
            return true;
        }
    return false;
}

bool ends_with_any(std::string_view s, std::initializer_list<std::string_view> suffixes, std::size_t& len) {
    for (auto p : suffixes)
        if (s.size() > p.size() && s.ends_with(p)) {
            len = p.size();
            return true;
        }
    return false;
}

struct raw_token {
    std::string text;
    std::size_t offset;
    enum class kind { word, step_ref, punct, quote, possessive, negation } k;
};

void split_chunk(std::string_view chunk, std::size_t offset, std::vector<raw_token>& out) {
    while (!chunk.empty()) {
        std::size_t len = 0;
        std::match_results<std::string_view::const_iterator> m;
        if (std::regex_search(chunk.begin(), chunk.end(), m, step_ref_regex())) {
            out.push_back({m[0].str(), offset, raw_token::kind::step_ref});
            const auto n = static_cast<std::size_t>(m.length(0));
            chunk.remove_prefix(n);
            offset += n;
            continue;
        }
        if (drop_chars.find(chunk.front()) != std::string_view::npos) {
            out.push_back({std::string(1, chunk.front()), offset, raw_token::kind::quote});
            chunk.remove_prefix(1);
            ++offset;
            continue;
        }
        if (starts_with_any(chunk, {"“", "‘"}, len)) {
            out.push_back({std::string(chunk.substr(0, len)), offset, raw_token::kind::quote});
            chunk.remove_prefix(len);
            offset += len;
            continue;
        }
        if (punct_chars.find(chunk.front()) != std::string_view::npos) {
            out.push_back({std::string(1, chunk.front()), offset, raw_token::kind::punct});
            chunk.remove_prefix(1);
            ++offset;
            continue;
        }
        break;
    }
    if (chunk.empty()) return;

    // Peel trailing punctuation, quotes and step references.
    std::vector<raw_token> tail;
    for (;;) {
        std::size_t len = 0;
        if (chunk.empty()) break;
        const char last = chunk.back();
        if (punct_chars.find(last) != std::string_view::npos &&
            !(last == '.' && chunk.size() > 1 && is_number(chunk) && chunk.find('.') + 1 != chunk.size())) {
            tail.push_back({std::string(1, last), offset + chunk.size() - 1, raw_token::kind::punct});
            chunk.remove_suffix(1);
            continue;
        }
        if (drop_chars.find(last) != std::string_view::npos && !chunk.ends_with("'s") && !chunk.ends_with("n't")) {
            tail.push_back({std::string(1, last), offset + chunk.size() - 1, raw_token::kind::quote});
            chunk.remove_suffix(1);
            continue;
        }
        if (ends_with_any(chunk, {"”", "’"}, len) && !chunk.ends_with("’s")) {
            tail.push_back({std::string(chunk.substr(chunk.size() - len)), offset + chunk.size() - len, raw_token::kind::quote});
            chunk.remove_suffix(len);
            continue;
        }
        const auto bracket = chunk.rfind('[');
        if (last == ']' && bracket != std::string_view::npos) {
            std::match_results<std::string_view::const_iterator> m;
            const auto piece = chunk.substr(bracket);
            if (std::regex_match(piece.begin(), piece.end(), m, std::regex(R"(\[(\d+(?:\.\d+)*)\])"))) {
                tail.push_back({std::string(piece), offset + bracket, raw_token::kind::step_ref});
                chunk.remove_suffix(piece.size());
                continue;
            }
        }
        break;
    }
    if (!chunk.empty()) {
        std::size_t len = 0;
        std::optional<raw_token> suffix;
        if (ends_with_any(chunk, {"'s", "’s"}, len)) {
            suffix = raw_token{"'s", offset + chunk.size() - len, raw_token::kind::possessive};
            chunk.remove_suffix(len);
        } else if (ends_with_any(chunk, {"n't", "n’t"}, len)) {
            suffix = raw_token{"n't", offset + chunk.size() - len, raw_token::kind::negation};
            chunk.remove_suffix(len);
            if (chunk == "ca" || chunk == "Ca") chunk = chunk.front() == 'C' ? "Can" : "can";
            if (chunk == "wo" || chunk == "Wo") chunk = chunk.front() == 'W' ? "Will" : "will";
        }
        out.push_back({std::string(chunk), offset, raw_token::kind::word});
        if (suffix) out.push_back(*suffix);
    }
    out.insert(out.end(), tail.rbegin(), tail.rend());
}

std::vector<raw_token> split_tokens(std::string_view s) {
    std::vector<raw_token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        const auto start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) split_chunk(s.substr(start, i - start), start, out);
    }
    return out;
}

// Candidate readings for a word missing from the lexicon.
std::vector<lexicon_entry> guess_entries(const std::string& w) {
    auto ends = [&](std::string_view suf) { return w.size() > suf.size() + 1 && w.ends_with(suf); };
    const std::string base = lemmatize(w, lexicon{});
    if (ends("ly")) return {{w, pos::ADV}};
    if (ends("ing") || ends("ed")) return {{base, pos::V}, {w, pos::ADJ}};
    for (auto suf : {"tion", "sion", "ment", "ness", "ity", "ance", "ence", "er", "or", "ist", "ism"})
        if (ends(suf)) return {{w, pos::N}};
    for (auto suf : {"ful", "ous", "ive", "able", "ible", "al", "ic", "less"})
        if (ends(suf)) return {{w, pos::ADJ}};
    if (ends("s")) return {{base, pos::N}, {base, pos::V}};
    return {{w, pos::N}, {w, pos::V}};
}

bool subject_pronoun(std::string_view w) {
    return w == "you" || w == "i" || w == "we" || w == "they" || w == "he" || w == "she" || w == "it";
}

bool object_pronoun(std::string_view w) { return w == "them" || w == "it" || w == "him" || w == "her" || w == "us"; }

struct candidate_view {
    std::vector<lexicon_entry> entries;
    std::optional<pos> fixed;

    [[nodiscard]] bool has(pos p) const {
        if (fixed) return *fixed == p;
        return std::any_of(entries.begin(), entries.end(), [p](const auto& e) { return e.tag == p; });
    }
    [[nodiscard]] pos first() const { return fixed ? *fixed : entries.front().tag; }
    [[nodiscard]] const lexicon_entry* find(pos p) const {
        for (const auto& e : entries)
            if (e.tag == p) return &e;
        return nullptr;
    }
};

} // namespace

const std::set<std::string>& default_keywords() {
    static const std::set<std::string> kw = {"if", "wait", "until", "after", "once", "and", "or", "no", "not"};
    return kw;
}

std::string strip_step_marker(std::string_view sentence) {
    static const std::regex re(R"(^\s*\[\d+(?:\.\d+)*\]\s*)");
    std::string s = std::regex_replace(std::string(sentence), re, "", std::regex_constants::format_first_only);
    const auto b = s.find_first_not_of(" \t\r\n");
    const auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

tagger::tagger(const lexicon& lex, std::set<std::string> keywords) : _lex(&lex), _keywords(std::move(keywords)) {}

std::vector<token> tagger::tag(std::string_view sentence) const {
    const auto raws = split_tokens(sentence);
    std::vector<candidate_view> views;
    views.reserve(raws.size());
    for (const auto& r : raws) {
        candidate_view v;
        const auto w = lower(r.text);
        switch (r.k) {
        case raw_token::kind::step_ref: v.fixed = pos::STEPREF; break;
        case raw_token::kind::punct:
        case raw_token::kind::quote: v.fixed = pos::PUNCT; break;
        case raw_token::kind::possessive: v.fixed = pos::OTHER; break;
        case raw_token::kind::negation: v.fixed = pos::KEYWORD; break;
        case raw_token::kind::word:
            if (_keywords.contains(w))
                v.fixed = pos::KEYWORD;
            else if (is_number(w))
                v.fixed = pos::NUM;
            else {
                v.entries = _lex->lookup(w);
                if (v.entries.empty()) v.entries = guess_entries(w);
            }
            break;
        }
        views.push_back(std::move(v));
    }

    std::vector<token> out;
    out.reserve(raws.size());
    bool clause_start = true;
    for (std::size_t i = 0; i < raws.size(); ++i) {
        const auto& r = raws[i];
        const auto& v = views[i];
        const auto w = lower(r.text);
        token t{r.text, w, pos::OTHER, r.offset};
        if (v.fixed) {
            t.tag = *v.fixed;
            if (r.k == raw_token::kind::negation) t.lemma = "not";
            if (r.k == raw_token::kind::step_ref) t.lemma = w.substr(1, w.size() - 2);
            out.push_back(t);
            if (t.tag == pos::PUNCT && (w == "," || w == ";" || w == ":" || w == "." || w == "!" || w == "?"))
                clause_start = true;
            else if (t.tag != pos::STEPREF && r.k != raw_token::kind::quote)
                clause_start = false;
            continue;
        }

        const token* prev = out.empty() ? nullptr : &out.back();
        const candidate_view* next = i + 1 < views.size() ? &views[i + 1] : nullptr;
        const bool next_det = next && !next->fixed && (next->first() == pos::DET ||
                                                       (next->first() == pos::PRON && object_pronoun(lower(raws[i + 1].text))));
        const bool next_nominal = next && !next->fixed && next->has(pos::N);
        const bool participle = w.ends_with("ing") || w.ends_with("ed");
        auto prev_is = [&](pos p) { return prev && prev->tag == p; };
        const bool prev_modifier_slot = prev_is(pos::DET) || prev_is(pos::ADJ) || prev_is(pos::NUM) ||
                                        prev_is(pos::OTHER) || prev_is(pos::PREP) || prev_is(pos::V);

        std::optional<pos> choice;
        if (clause_start && v.has(pos::V))
            choice = pos::V;
        else if (prev_is(pos::AUX)) {
            if (v.has(pos::V) && (participle || v.find(pos::V)->lemma != w))
                choice = pos::V;
            else if (v.has(pos::ADJ))
                choice = pos::ADJ;
            else if (v.has(pos::V))
                choice = pos::V;
        } else if (prev_is(pos::KEYWORD) && prev->lemma == "not" && v.has(pos::V))
            choice = pos::V;
        else if (prev_is(pos::PRON) && subject_pronoun(prev->lemma) && v.has(pos::V))
            choice = pos::V;
        else if (prev_is(pos::PREP) && prev->lemma == "to" && v.has(pos::V) && v.find(pos::V)->lemma == w)
            choice = pos::V;

        if (!choice && prev_modifier_slot && next_nominal && !(next->first() == pos::ADJ && !next->has(pos::N))) {
            if (v.has(pos::ADJ) && !v.has(pos::N))
                choice = pos::ADJ;
            else if (v.has(pos::ADJ) && v.has(pos::N) && v.first() != pos::N)
                choice = pos::ADJ;
            else if (v.has(pos::ADJ) && v.has(pos::N) && (prev_is(pos::V) || prev_is(pos::DET)) && !v.has(pos::V))
                choice = pos::ADJ;
            else if (participle && v.has(pos::V) && !v.has(pos::N) && !prev_is(pos::PREP))
                choice = pos::ADJ;
        }
        if (!choice && v.has(pos::V) && next_det && !prev_is(pos::DET) && !prev_is(pos::ADJ) && !prev_is(pos::OTHER))
            choice = pos::V;
        // Coordinated nouns: "problem and inputs".
        if (!choice && prev_is(pos::KEYWORD) && (prev->lemma == "and" || prev->lemma == "or") && out.size() >= 2 &&
            out[out.size() - 2].tag == pos::N && v.has(pos::N))
            choice = pos::N;
        if (!choice && (prev_is(pos::DET) || prev_is(pos::ADJ) || prev_is(pos::NUM) || prev_is(pos::OTHER) ||
                        prev_is(pos::PREP)) &&
            v.has(pos::N))
            choice = pos::N;
        if (!choice && prev_is(pos::N)) {
            if (w.ends_with("ing") && v.has(pos::N))
                choice = pos::N;
            else if (v.has(pos::V) && next && !next->fixed &&
                     (next->first() == pos::ADJ || next->first() == pos::DET ||
                      next->first() == pos::ADV || next->first() == pos::PRON))
                choice = pos::V;
            else if (v.has(pos::N))
                choice = pos::N;
        }
        if (!choice) choice = v.first();

        if (const auto* e = v.find(*choice))
            t.lemma = e->lemma;
        else
            t.lemma = w;   // participle used as a modifier
        t.tag = *choice;
        out.push_back(t);
        // A leading modifier keeps the clause open for its imperative verb.
        if (!(clause_start && (t.tag == pos::ADV || t.tag == pos::ADJ))) clause_start = false;
    }
    return out;
}

std::vector<token> tokenize_and_tag(std::string_view sentence) {
    static const tagger t;
    return t.tag(sentence);
}

} // namespace taskfsa
