#include "taskfsa/glm/backend.hpp"

#include "taskfsa/stepparse/tagger.hpp"

#include <json.hpp>

#include <cctype>
#include <ctime>
#include <fstream>
#include <sstream>

namespace taskfsa {

namespace {

constexpr int transcript_version = 1;

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

glm_params glm_params::defaults() {
    glm_params p;
    for (const auto& k : default_keywords()) p.keyword_bias[k] = 5.0;
    return p;
}

std::string normalize_whitespace(std::string_view s) {
    std::string out;
    bool space = false;
    for (const char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = !out.empty();
            continue;
        }
        if (space) out += ' ';
        space = false;
        out += c;
    }
    return out;
}

std::string transcript::to_json_text() const {
    nlohmann::ordered_json j;
    j["kind"] = "transcript";
    j["version"] = transcript_version;
    auto& arr = j["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        nlohmann::ordered_json o;
        o["prompt"] = e.prompt;
        o["completion"] = e.completion;
        o["timestamp"] = e.timestamp;
        o["backend"] = e.backend_id;
        o["source"] = e.source;
        arr.push_back(std::move(o));
    }
    return j.dump(2) + "\n";
}

transcript transcript::from_json_text(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw precondition_error(std::string("transcript is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || j.value("kind", "") != "transcript" || !j.contains("entries") || !j["entries"].is_array())
        throw precondition_error("transcript must be an object of kind \"transcript\" with an entries array");
    if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != transcript_version)
        throw precondition_error("unsupported transcript version");
    transcript t;
    for (const auto& e : j["entries"]) {
        if (!e.is_object() || !e.contains("prompt") || !e.contains("completion") || !e["prompt"].is_string() ||
            !e["completion"].is_string())
            throw precondition_error("transcript entry needs string prompt and completion");
        t.entries.push_back({e["prompt"].get<std::string>(), e["completion"].get<std::string>(),
                             e.value("timestamp", ""), e.value("backend", ""), e.value("source", "")});
    }
    return t;
}

transcript transcript::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw precondition_error("cannot read transcript " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

void transcript::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw precondition_error("cannot write transcript " + path);
    out << to_json_text();
}

replay_backend::replay_backend(transcript t) {
    for (auto& e : t.entries) _answers[normalize_whitespace(e.prompt)].push_back(std::move(e.completion));
}

std::string replay_backend::complete(const prompt& p) {
    const auto key = normalize_whitespace(p.text);
    std::lock_guard lock(_mutex);
    const auto it = _answers.find(key);
    if (it == _answers.end()) throw replay_miss(p.text);
    auto& served = _served[key];
    const auto& answers = it->second;
    const auto& answer = answers[std::min(served, answers.size() - 1)];
    ++served;
    return answer;
}

std::string glm_client::complete(const prompt& p) {
    if (p.text.empty()) throw precondition_error("prompt text is empty");
    if (p.params.max_tokens <= 0) throw precondition_error("max_tokens must be positive");
    if (p.params.temperature < 0) throw precondition_error("temperature must be non-negative");
    auto completion = _backend->complete(p);
    std::lock_guard lock(_mutex);
    _log.entries.push_back({p.text, completion, utc_now(), _backend->id(), "recorded"});
    return completion;
}

transcript glm_client::log() const {
    std::lock_guard lock(_mutex);
    return _log;
}

} // namespace taskfsa
