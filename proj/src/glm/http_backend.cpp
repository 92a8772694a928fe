#include "taskfsa/glm/backend.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <regex>
#include <thread>

namespace taskfsa {

namespace {

struct split_url {
    std::string origin;   // scheme://host[:port]
    std::string path;
};

split_url parse_endpoint(const std::string& url) {
    static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(url, m, re)) throw precondition_error("GLM endpoint must be an http(s) URL: " + url);
    return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

std::string env_or(const char* name, std::string fallback = {}) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : fallback;
}

} // namespace

http_backend_config http_backend_config::from_env() {
    http_backend_config cfg;
    cfg.endpoint = env_or("TASKFSA_GLM_ENDPOINT");
    cfg.api_key = env_or("TASKFSA_GLM_API_KEY");
    cfg.model = env_or("TASKFSA_GLM_MODEL");
    return cfg;
}

http_backend::http_backend(http_backend_config cfg) : _cfg(std::move(cfg)) {
    if (_cfg.endpoint.empty()) throw precondition_error("GLM endpoint not configured (TASKFSA_GLM_ENDPOINT)");
    (void)parse_endpoint(_cfg.endpoint);
    if (_cfg.retries < 1) throw precondition_error("retries must be at least 1");
}

std::string http_backend::complete(const prompt& p) {
    const auto url = parse_endpoint(_cfg.endpoint);
    nlohmann::json body;
    body["prompt"] = p.text;
    body["max_tokens"] = p.params.max_tokens;
    body["temperature"] = p.params.temperature;
    body["keyword_bias"] = p.params.keyword_bias;
    if (!_cfg.model.empty()) body["model"] = _cfg.model;

    httplib::Headers headers;
    if (!_cfg.api_key.empty()) headers.emplace("Authorization", "Bearer " + _cfg.api_key);

    std::string last_error;
    auto backoff = _cfg.initial_backoff;
    for (int attempt = 1; attempt <= _cfg.retries; ++attempt) {
        httplib::Client client(url.origin);
        client.set_connection_timeout(_cfg.timeout);
        client.set_read_timeout(_cfg.timeout);
        const auto res = client.Post(url.path, headers, body.dump(), "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
        } else if (res->status == 401 || res->status == 403) {
            throw backend_unavailable("GLM endpoint rejected the credential (HTTP " + std::to_string(res->status) + ")");
        } else if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status);
        } else {
            try {
                const auto j = nlohmann::json::parse(res->body);
                if (j.contains("completion") && j["completion"].is_string()) return j["completion"].get<std::string>();
                if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty() &&
                    j["choices"][0].contains("text"))
                    return j["choices"][0]["text"].get<std::string>();
                last_error = "response has no completion text";
            } catch (const nlohmann::json::exception& e) {
                last_error = std::string("response is not JSON: ") + e.what();
            }
        }
        if (attempt < _cfg.retries) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
    }
    throw backend_unavailable("GLM endpoint " + _cfg.endpoint + " failed after " + std::to_string(_cfg.retries) +
                              " attempts: " + last_error);
}

} // namespace taskfsa
