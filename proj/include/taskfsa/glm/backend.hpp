#pragma once

#include "taskfsa/core/errors.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace taskfsa {

class backend_unavailable : public error {
public:
    using error::error;
};

class replay_miss : public error {
public:
    explicit replay_miss(std::string prompt)
        : error("prompt not found in transcript: " + prompt.substr(0, 120)), _prompt(std::move(prompt)) {}
    [[nodiscard]] const std::string& prompt() const noexcept { return _prompt; }

private:
    std::string _prompt;
};

struct glm_params {
    int max_tokens = 256;
    double temperature = 0.0;
    std::map<std::string, double> keyword_bias;

    // +5 on each grammar keyword.
    [[nodiscard]] static glm_params defaults();

    friend bool operator==(const glm_params&, const glm_params&) = default;
};

struct prompt {
    std::string text;
    glm_params params = glm_params::defaults();
};

struct transcript_entry {
    std::string prompt;
    std::string completion;
    std::string timestamp;
    std::string backend_id;
    std::string source;   // "reference", "authored" or "recorded"

    friend bool operator==(const transcript_entry&, const transcript_entry&) = default;
};

struct transcript {
    std::vector<transcript_entry> entries;

    [[nodiscard]] std::string to_json_text() const;
    [[nodiscard]] static transcript from_json_text(std::string_view text);   // throws precondition_error
    [[nodiscard]] static transcript load(const std::string& path);
    void save(const std::string& path) const;
};

// Collapses whitespace runs to one space and trims the ends.
[[nodiscard]] std::string normalize_whitespace(std::string_view s);

class glm_backend {
public:
    virtual ~glm_backend() = default;
    [[nodiscard]] virtual std::string id() const = 0;
    [[nodiscard]] virtual std::string complete(const prompt& p) = 0;
};

// Answers prompts from a transcript. Repeated prompts are served in recorded
// order; once exhausted the last answer is reused.
class replay_backend final : public glm_backend {
public:
    explicit replay_backend(transcript t);
    [[nodiscard]] std::string id() const override { return "replay"; }
    [[nodiscard]] std::string complete(const prompt& p) override;

private:
    std::map<std::string, std::vector<std::string>> _answers;
    std::map<std::string, std::size_t> _served;
    std::mutex _mutex;
};

class scripted_backend final : public glm_backend {
public:
    using script = std::function<std::string(const prompt&)>;
    explicit scripted_backend(script s, std::string id = "scripted") : _script(std::move(s)), _id(std::move(id)) {}
    [[nodiscard]] std::string id() const override { return _id; }
    [[nodiscard]] std::string complete(const prompt& p) override { return _script(p); }

private:
    script _script;
    std::string _id;
};

struct http_backend_config {
    std::string endpoint;   // e.g. http://localhost:8000/v1/completions
    std::string api_key;
    std::string model;
    int retries = 3;
    std::chrono::milliseconds initial_backoff{200};
    std::chrono::seconds timeout{60};

    // Reads TASKFSA_GLM_ENDPOINT, TASKFSA_GLM_API_KEY and TASKFSA_GLM_MODEL.
    [[nodiscard]] static http_backend_config from_env();
};

// Generic text-completion contract: POST {prompt, max_tokens, temperature,
// keyword_bias, model}; accepts {"completion": s} or {"choices": [{"text": s}]}.
class http_backend final : public glm_backend {
public:
    explicit http_backend(http_backend_config cfg);
    [[nodiscard]] std::string id() const override { return "http:" + _cfg.endpoint; }
    [[nodiscard]] std::string complete(const prompt& p) override;

private:
    http_backend_config _cfg;
};

// Front end used by the pipeline: forwards to a backend and keeps the session
// transcript. Safe to share between threads.
class glm_client {
public:
    explicit glm_client(std::shared_ptr<glm_backend> backend) : _backend(std::move(backend)) {}

    [[nodiscard]] std::string complete(const prompt& p);
    [[nodiscard]] transcript log() const;
    [[nodiscard]] const glm_backend& backend() const { return *_backend; }

private:
    std::shared_ptr<glm_backend> _backend;
    mutable std::mutex _mutex;
    transcript _log;
};

} // namespace taskfsa
