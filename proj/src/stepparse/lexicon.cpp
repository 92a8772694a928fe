#include "taskfsa/stepparse/lexicon.hpp"

#include "taskfsa/core/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace taskfsa {

namespace detail {
std::string_view embedded_lexicon();
}

namespace {

constexpr std::array<std::string_view, 14> pos_names = {
    "N", "V", "ADJ", "ADV", "DET", "NUM", "PREP", "PRON", "AUX", "CONJ", "KEYWORD", "STEPREF", "PUNCT", "OTHER"};

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool has_vowel(std::string_view s) {
    return std::any_of(s.begin(), s.end(), [](char c) { return is_vowel(c) || c == 'y'; });
}

// Undoes consonant doubling ("stopped" -> "stop") and restores a dropped e
// ("making" -> "make") where the stem shape calls for it.
std::string restore_stem(std::string stem) {
    const auto n = stem.size();
    if (n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) && stem[n - 1] != 'l' &&
        stem[n - 1] != 's' && stem[n - 1] != 'z' && stem[n - 1] != 'f')
        stem.pop_back();
    else if (n >= 3 && !is_vowel(stem[n - 1]) && stem[n - 1] != 'w' && stem[n - 1] != 'x' &&
             stem[n - 1] != 'y' && is_vowel(stem[n - 2]) && !is_vowel(stem[n - 3]) &&
             (n == 3 || !is_vowel(stem[n - 4])) && (stem.ends_with("at") || stem.ends_with("iz") ||
                                                    stem.ends_with("ut") || stem.ends_with("id") ||
                                                    stem.ends_with("ak") || stem.ends_with("ar")))
        stem.push_back('e');
    return stem;
}

std::string suffix_lemma(const std::string& w) {
    const auto n = w.size();
    if (n > 4 && w.ends_with("ies")) return w.substr(0, n - 3) + "y";
    if (n > 4 && (w.ends_with("sses") || w.ends_with("shes") || w.ends_with("ches") || w.ends_with("xes") ||
                  w.ends_with("zes")))
        return w.substr(0, n - 2);
    if (n > 3 && w.ends_with("s") && !w.ends_with("ss") && !w.ends_with("us") && !w.ends_with("is"))
        return w.substr(0, n - 1);
    if (n > 5 && w.ends_with("ing") && has_vowel(w.substr(0, n - 3))) return restore_stem(w.substr(0, n - 3));
    if (n > 4 && w.ends_with("ied")) return w.substr(0, n - 3) + "y";
    if (n > 4 && w.ends_with("ed") && has_vowel(w.substr(0, n - 2))) return restore_stem(w.substr(0, n - 2));
    return w;
}

} // namespace

std::string_view pos_name(pos p) { return pos_names.at(static_cast<std::size_t>(p)); }

pos pos_from_name(std::string_view name) {
    for (std::size_t i = 0; i < pos_names.size(); ++i)
        if (pos_names[i] == name) return static_cast<pos>(i);
    throw precondition_error("unknown part of speech: " + std::string(name));
}

lexicon lexicon::parse(std::string_view tsv) {
    lexicon lex;
    std::istringstream in{std::string(tsv)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos)
            throw precondition_error("lexicon line " + std::to_string(line_no) + " needs three columns");
        auto& slot = lex._entries[lower(line.substr(0, t1))];
        slot.push_back({line.substr(t1 + 1, t2 - t1 - 1), pos_from_name(line.substr(t2 + 1))});
        ++lex._size;
    }
    return lex;
}

const lexicon& lexicon::builtin() {
    static const lexicon lex = parse(detail::embedded_lexicon());
    return lex;
}

const std::vector<lexicon_entry>& lexicon::lookup(std::string_view word) const {
    static const std::vector<lexicon_entry> none;
    const auto it = _entries.find(word);
    return it == _entries.end() ? none : it->second;
}

std::vector<std::string> lexicon::surfaces() const {
    std::vector<std::string> out;
    out.reserve(_entries.size());
    for (const auto& [k, _] : _entries) out.push_back(k);
    return out;
}

std::string lemmatize(std::string_view word, const lexicon& lex) {
    std::string w = lower(word);
    // A lemma is a fixpoint: applying the procedure again changes nothing.
    for (int guard = 0; guard < 8; ++guard) {
        std::string next;
        const auto& entries = lex.lookup(w);
        if (!entries.empty())
            next = entries.front().lemma;
        else
            next = suffix_lemma(w);
        if (next == w) return w;
        w = std::move(next);
    }
    return w;
}

} // namespace taskfsa
