#pragma once

#include "taskfsa/core/model.hpp"
#include "taskfsa/glm/backend.hpp"

#include <map>
#include <string>
#include <vector>

namespace taskfsa {

// Phrase to canonical phrase. Canonical phrases are never keys, so applying
// the map twice equals applying it once.
class synonym_map {
public:
    // Records a ↦ canonical. Throws precondition_error if it would break idempotence.
    void add(const std::string& phrase, const std::string& canonical);

    [[nodiscard]] const std::string& apply(const std::string& phrase) const;
    [[nodiscard]] controller apply(const controller& c) const;
    [[nodiscard]] bool contains(const std::string& phrase) const { return _map.count(phrase) != 0; }
    [[nodiscard]] bool empty() const noexcept { return _map.empty(); }
    [[nodiscard]] const std::map<std::string, std::string>& entries() const noexcept { return _map; }

    friend bool operator==(const synonym_map&, const synonym_map&) = default;

private:
    std::map<std::string, std::string> _map;
};

struct consolidation {
    controller ctrl;
    synonym_map map;                 // known entries plus the ones found now
    std::size_t queries = 0;
    std::vector<std::string> log;    // unparseable verdicts and unmatched phrases
};

// Matches controller phrases absent from the model vocabulary against model
// phrases of the same kind, keeping the model's phrase. Entries already in
// known are applied without asking the GLM.
[[nodiscard]] consolidation consolidate_synonyms(const controller& c, const model& m, glm_client& glm,
                                                 const synonym_map& known = {});

} // namespace taskfsa
