#pragma once

#include "taskfsa/glm/backend.hpp"
#include "taskfsa/refine/session.hpp"

#include <json.hpp>

#include <string>

namespace taskfsa {

using json = nlohmann::ordered_json;

inline constexpr int document_version = 1;

// Malformed document; path is a JSON pointer to the offending value.
class schema_error : public error {
public:
    schema_error(std::string path, const std::string& message)
        : error((path.empty() ? std::string("/") : path) + ": " + message), _path(std::move(path)) {}
    [[nodiscard]] const std::string& path() const noexcept { return _path; }

private:
    std::string _path;
};

struct spec_document {
    std::string name;
    std::string ltl;
    friend bool operator==(const spec_document&, const spec_document&) = default;
};

struct verdict_document {
    std::string spec;    // LTL text
    verdict result;
    friend bool operator==(const verdict_document&, const verdict_document&) = default;
};

// Payload encoders; every object carries its fields in a fixed order.
[[nodiscard]] json to_json(const controller& c);
[[nodiscard]] json to_json(const model& m);
[[nodiscard]] json to_json(const step_tree& t);
[[nodiscard]] json to_json(const counterexample& cex);
[[nodiscard]] json to_json(const verdict& v);
[[nodiscard]] json to_json(const iteration& it);
[[nodiscard]] json to_json(const refinement_session& s);

// Payload decoders; path prefixes error locations.
[[nodiscard]] controller controller_from_json(const json& j, const std::string& path = "");
[[nodiscard]] model model_from_json(const json& j, const std::string& path = "");
[[nodiscard]] step_tree step_tree_from_json(const json& j, const std::string& path = "");
[[nodiscard]] counterexample counterexample_from_json(const json& j, const std::string& path = "");
[[nodiscard]] verdict verdict_from_json(const json& j, const std::string& path = "");
[[nodiscard]] refinement_session session_from_json(const json& j, const std::string& path = "");

// Whole documents: {"kind": ..., "version": 1, <payload fields>}.
[[nodiscard]] std::string document_kind(std::string_view text);
[[nodiscard]] std::string serialize(const controller& c);
[[nodiscard]] std::string serialize(const model& m);
[[nodiscard]] std::string serialize(const spec_document& s);
[[nodiscard]] std::string serialize(const step_tree& t);
[[nodiscard]] std::string serialize(const verdict_document& v);
[[nodiscard]] std::string serialize(const refinement_session& s);
[[nodiscard]] std::string serialize(const transcript& t);

[[nodiscard]] controller parse_controller_document(std::string_view text);
[[nodiscard]] model parse_model_document(std::string_view text);
[[nodiscard]] spec_document parse_spec_document(std::string_view text);
[[nodiscard]] step_tree parse_steps_document(std::string_view text);
[[nodiscard]] verdict_document parse_verdict_document(std::string_view text);
[[nodiscard]] refinement_session parse_session_document(std::string_view text);
[[nodiscard]] transcript parse_transcript_document(std::string_view text);

[[nodiscard]] std::string read_text_file(const std::string& path);   // throws precondition_error
void write_text_file(const std::string& path, std::string_view text);

} // namespace taskfsa
