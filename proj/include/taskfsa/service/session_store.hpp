#pragma once

#include "taskfsa/io/documents.hpp"

#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace taskfsa {

class not_found : public error {
public:
    using error::error;
};

// The requested operation is not allowed in the session's current state.
class conflict : public error {
public:
    using error::error;
};

class backend_failure : public error {
public:
    using error::error;
};

enum class resource_status { idle, querying, verifying, pass, fail, unrepresentable };

[[nodiscard]] std::string_view resource_status_name(resource_status s);

struct backend_config {
    std::string kind = "replay";       // "replay" or "live"
    transcript replay;                 // used when kind is replay
    http_backend_config live;          // used when kind is live

    [[nodiscard]] std::shared_ptr<glm_backend> make() const;
    [[nodiscard]] json to_json() const;
    [[nodiscard]] static backend_config from_json(const json& j, const std::string& path = "");
};

struct resource_snapshot {
    std::string id;
    std::uint64_t revision = 0;
    resource_status status = resource_status::idle;
    std::optional<refinement_session> session;
    std::string error;      // last failure, empty when the last operation succeeded
    bool busy = false;
};

enum class session_op { manual_refine, auto_refine, prune };

// In-memory sessions, optionally mirrored to a directory. Each session has
// one writer at a time; GLM-bound work runs on a worker thread unless the
// caller asks to wait.
class session_store {
public:
    explicit session_store(std::string persist_dir = {});
    ~session_store();
    session_store(const session_store&) = delete;
    session_store& operator=(const session_store&) = delete;

    // Returns the new id. Throws backend_failure only when wait is set.
    std::string create(const std::string& task, const model& m, const std::vector<std::string>& specs,
                       const backend_config& cfg, const session_options& options, bool wait);

    // Throws not_found, conflict, and backend_failure (when wait is set).
    resource_snapshot start(const std::string& id, session_op op, const std::string& instruction, bool wait);

    [[nodiscard]] resource_snapshot get(const std::string& id) const;   // throws not_found
    [[nodiscard]] std::vector<resource_snapshot> list() const;

    // Blocks until the session has no running operation.
    void wait_idle(const std::string& id) const;

private:
    struct entry;

    std::shared_ptr<entry> find(const std::string& id) const;
    void run(const std::shared_ptr<entry>& e, session_op op, const std::string& instruction);
    void persist(const entry& e) const;
    void load();
    void launch(std::function<void()> job);

    std::string _dir;
    mutable std::mutex _mutex;
    std::map<std::string, std::shared_ptr<entry>> _entries;
    std::uint64_t _next_id = 1;
    std::vector<std::thread> _workers;
};

} // namespace taskfsa
