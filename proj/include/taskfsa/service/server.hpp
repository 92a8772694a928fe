#pragma once

#include "taskfsa/service/session_store.hpp"

#include <memory>
#include <string>

namespace taskfsa {

// Full JSON view of a session as served by GET /sessions/{id}.
[[nodiscard]] json session_view(const resource_snapshot& s);

// JSON over HTTP in front of a session_store.
class api_server {
public:
    explicit api_server(session_store& store);
    ~api_server();
    api_server(const api_server&) = delete;
    api_server& operator=(const api_server&) = delete;

    // Binds (port 0 picks a free port) and serves on a background thread; returns the port.
    int start(const std::string& host, int port);
    // Binds and serves on the calling thread until stop().
    bool run(const std::string& host, int port);
    void stop();

private:
    struct impl;
    std::unique_ptr<impl> _impl;
};

} // namespace taskfsa
