#include "taskfsa/refine/synonyms.hpp"

#include "taskfsa/core/isomorphism.hpp"
#include "taskfsa/glm/queries.hpp"

#include <algorithm>
#include <sstream>

namespace taskfsa {

void synonym_map::add(const std::string& phrase, const std::string& canonical) {
    if (phrase == canonical) return;
    if (_map.count(canonical)) throw precondition_error("canonical phrase is itself mapped: " + canonical);
    for (const auto& [k, v] : _map) {
        if (v == phrase) throw precondition_error("phrase is already canonical: " + phrase);
    }
    const auto [it, inserted] = _map.emplace(phrase, canonical);
    if (!inserted && it->second != canonical) {
        throw precondition_error("phrase already mapped elsewhere: " + phrase);
    }
}

const std::string& synonym_map::apply(const std::string& phrase) const {
    const auto it = _map.find(phrase);
    return it == _map.end() ? phrase : it->second;
}

controller synonym_map::apply(const controller& c) const {
    if (_map.empty()) return c;
    return rewrite_labels(c, [this](const std::string& s) { return apply(s); });
}

namespace {

std::set<std::string> words(const std::string& phrase) {
    std::set<std::string> out;
    std::istringstream in(phrase);
    for (std::string w; in >> w;) out.insert(w);
    return out;
}

std::size_t overlap(const std::string& a, const std::string& b) {
    const auto wa = words(a);
    const auto wb = words(b);
    return static_cast<std::size_t>(std::count_if(wa.begin(), wa.end(), [&](const auto& w) { return wb.count(w); }));
}

// Candidates sharing more words come first; among equals, phrases the
// controller does not use yet, then alphabetical.
std::vector<std::string> ranked(const std::string& phrase, const std::set<std::string>& pool,
                                const std::set<std::string>& used) {
    std::vector<std::string> out(pool.begin(), pool.end());
    std::stable_sort(out.begin(), out.end(), [&](const std::string& x, const std::string& y) {
        const auto ox = overlap(phrase, x);
        const auto oy = overlap(phrase, y);
        if (ox != oy) return ox > oy;
        const bool ux = used.count(x) != 0;
        const bool uy = used.count(y) != 0;
        if (ux != uy) return !ux;
        return x < y;
    });
    return out;
}

void match_kind(const std::set<std::string>& controller_phrases, const std::set<std::string>& model_phrases,
                glm_client& glm, consolidation& result) {
    std::set<std::string> used;
    std::vector<std::string> missing;
    for (const auto& p : controller_phrases) {
        if (model_phrases.count(p)) {
            used.insert(p);
        } else {
            missing.push_back(p);
        }
    }
    for (const auto& phrase : missing) {
        if (result.map.contains(phrase)) {
            if (model_phrases.count(result.map.apply(phrase))) {
                used.insert(result.map.apply(phrase));
            } else {
                result.log.push_back("cached match for \"" + phrase + "\" is not in the model");
            }
            continue;
        }
        bool matched = false;
        for (const auto& candidate : ranked(phrase, model_phrases, used)) {
            synonym_verdict v{};
            try {
                v = query_synonym(glm, phrase, candidate);
            } catch (const unparseable_verdict& e) {
                result.log.push_back("left distinct: \"" + phrase + "\" / \"" + candidate + "\": " + e.what());
                continue;
            }
            if (v.queried) ++result.queries;
            if (v.equivalent) {
                result.map.add(phrase, candidate);
                used.insert(candidate);
                matched = true;
                break;
            }
        }
        if (!matched) result.log.push_back("no model phrase matches \"" + phrase + "\"");
    }
}

} // namespace

consolidation consolidate_synonyms(const controller& c, const model& m, glm_client& glm, const synonym_map& known) {
    consolidation result;
    result.map = known;
    match_kind(c.actions, m.action_props, glm, result);
    match_kind(c.props, m.label_props, glm, result);
    result.ctrl = result.map.apply(c);
    return result;
}

} // namespace taskfsa
