#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace taskfsa {

// Part-of-speech tags. PREP, PRON, AUX and CONJ refine what a coarser tag set
// would call OTHER; the grammar needs them to find clause boundaries.
enum class pos { N, V, ADJ, ADV, DET, NUM, PREP, PRON, AUX, CONJ, KEYWORD, STEPREF, PUNCT, OTHER };

[[nodiscard]] std::string_view pos_name(pos p);
[[nodiscard]] pos pos_from_name(std::string_view name);   // throws precondition_error

struct lexicon_entry {
    std::string lemma;
    pos tag;
};

// surface TAB lemma TAB pos per line; '#' starts a comment line.
class lexicon {
public:
    lexicon() = default;
    [[nodiscard]] static lexicon parse(std::string_view tsv);
    [[nodiscard]] static const lexicon& builtin();

    // Entries in preference order; empty when the word is unknown.
    [[nodiscard]] const std::vector<lexicon_entry>& lookup(std::string_view lower) const;
    [[nodiscard]] std::size_t size() const noexcept { return _size; }
    [[nodiscard]] std::vector<std::string> surfaces() const;

private:
    std::map<std::string, std::vector<lexicon_entry>, std::less<>> _entries;
    std::size_t _size = 0;
};

// Base form of a word: lexicon first, suffix rules otherwise. Idempotent.
[[nodiscard]] std::string lemmatize(std::string_view word, const lexicon& lex = lexicon::builtin());

} // namespace taskfsa
