#include "taskfsa/service/session_store.hpp"

#include "taskfsa/glm/queries.hpp"

#include <filesystem>

namespace taskfsa {

std::string_view resource_status_name(resource_status s) {
    switch (s) {
    case resource_status::idle: return "idle";
    case resource_status::querying: return "querying";
    case resource_status::verifying: return "verifying";
    case resource_status::pass: return "pass";
    case resource_status::fail: return "fail";
    case resource_status::unrepresentable: return "unrepresentable";
    }
    return "idle";
}

std::shared_ptr<glm_backend> backend_config::make() const {
    if (kind == "replay") return std::make_shared<replay_backend>(replay);
    if (kind == "live") return std::make_shared<http_backend>(live);
    throw precondition_error("unknown backend kind: " + kind);
}

json backend_config::to_json() const {
    json j;
    j["kind"] = kind;
    if (kind == "replay") {
        j["transcript"] = json::parse(replay.to_json_text());
    } else {
        j["endpoint"] = live.endpoint;
        j["model"] = live.model;
    }
    return j;
}

backend_config backend_config::from_json(const json& j, const std::string& path) {
    if (!j.is_object()) throw schema_error(path, "expected an object");
    backend_config cfg;
    const auto kind = j.find("kind");
    if (kind == j.end() || !kind->is_string()) throw schema_error(path + "/kind", "expected \"replay\" or \"live\"");
    cfg.kind = kind->get<std::string>();
    if (cfg.kind == "replay") {
        const auto t = j.find("transcript");
        if (t == j.end() || !t->is_object()) throw schema_error(path + "/transcript", "expected a transcript document");
        cfg.replay = parse_transcript_document(t->dump());
    } else if (cfg.kind == "live") {
        cfg.live = http_backend_config::from_env();
        if (const auto e = j.find("endpoint"); e != j.end() && e->is_string() && !e->get<std::string>().empty())
            cfg.live.endpoint = e->get<std::string>();
        if (const auto m = j.find("model"); m != j.end() && m->is_string() && !m->get<std::string>().empty())
            cfg.live.model = m->get<std::string>();
        if (cfg.live.endpoint.empty()) throw schema_error(path + "/endpoint", "live backend needs an endpoint");
    } else {
        throw schema_error(path + "/kind", "expected \"replay\" or \"live\"");
    }
    return cfg;
}

struct session_store::entry {
    std::string id;
    backend_config cfg;
    std::unique_ptr<glm_client> glm;

    mutable std::mutex m;
    mutable std::condition_variable cv;
    std::uint64_t revision = 0;
    resource_status status = resource_status::idle;
    std::optional<refinement_session> session;
    std::string error;
    bool busy = false;

    resource_snapshot snapshot() const {
        return {id, revision, status, session, error, busy};
    }

    // Caller holds m.
    void set(resource_status s) {
        status = s;
        ++revision;
        cv.notify_all();
    }
};

namespace {

resource_status from_session(const refinement_session& s) {
    switch (s.status) {
    case session_status::pass: return resource_status::pass;
    case session_status::fail: return resource_status::fail;
    case session_status::unrepresentable: return resource_status::unrepresentable;
    }
    return resource_status::fail;
}

bool is_backend_error(const std::exception& e) {
    return dynamic_cast<const backend_unavailable*>(&e) || dynamic_cast<const replay_miss*>(&e) ||
           dynamic_cast<const malformed_completion*>(&e);
}

} // namespace

session_store::session_store(std::string persist_dir) : _dir(std::move(persist_dir)) {
    if (!_dir.empty()) {
        std::filesystem::create_directories(_dir);
        load();
    }
}

session_store::~session_store() {
    std::vector<std::thread> workers;
    {
        std::lock_guard lock(_mutex);
        workers.swap(_workers);
    }
    for (auto& w : workers) w.join();
}

void session_store::launch(std::function<void()> job) {
    std::lock_guard lock(_mutex);
    _workers.emplace_back(std::move(job));
}

std::shared_ptr<session_store::entry> session_store::find(const std::string& id) const {
    std::lock_guard lock(_mutex);
    const auto it = _entries.find(id);
    if (it == _entries.end()) throw not_found("no session " + id);
    return it->second;
}

std::string session_store::create(const std::string& task, const model& m, const std::vector<std::string>& specs,
                                  const backend_config& cfg, const session_options& options, bool wait) {
    if (normalize_whitespace(task).empty()) throw precondition_error("task description is empty");
    if (!validate_model(m).empty()) throw precondition_error("model is invalid: " + validate_model(m).front().message);
    for (const auto& s : specs) (void)parse_ltl(s);
    if (options.depth == 0 || options.depth > options.max_depth)
        throw precondition_error("depth must be between 1 and max_depth");

    auto e = std::make_shared<entry>();
    e->cfg = cfg;
    e->glm = std::make_unique<glm_client>(cfg.make());
    {
        std::lock_guard lock(_mutex);
        e->id = "s" + std::to_string(_next_id++);
        _entries[e->id] = e;
    }
    {
        std::lock_guard lock(e->m);
        e->busy = true;
        e->set(resource_status::querying);
    }
    auto job = [this, e, task, m, specs, options, wait] {
        try {
            auto s = start_session(task, m, specs, *e->glm, options);
            std::lock_guard lock(e->m);
            e->set(resource_status::verifying);
            e->session = std::move(s);
            e->error.clear();
            e->busy = false;
            e->set(from_session(*e->session));
            persist(*e);
        } catch (const std::exception& ex) {
            {
                std::lock_guard lock(e->m);
                e->error = (is_backend_error(ex) ? "backend failure: " : "") + std::string(ex.what());
                e->busy = false;
                e->set(resource_status::idle);
            }
            if (wait) {
                if (is_backend_error(ex)) throw backend_failure(ex.what());
                throw;
            }
        }
    };
    if (wait) {
        job();
    } else {
        launch(job);
    }
    return e->id;
}

void session_store::run(const std::shared_ptr<entry>& e, session_op op, const std::string& instruction) {
    refinement_session current;
    {
        std::lock_guard lock(e->m);
        current = *e->session;
    }
    refinement_session next;
    switch (op) {
    case session_op::manual_refine: next = manual_refine(current, instruction, *e->glm); break;
    case session_op::auto_refine: next = auto_refine(current, *e->glm); break;
    case session_op::prune: next = prune(current, *e->glm); break;
    }
    {
        std::lock_guard lock(e->m);
        e->set(resource_status::verifying);
    }
    // Independent re-check of the committed controller before it is published.
    const auto verdicts = verify_all(next.mdl, next.ctrl(), next.specs);
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        if (verdicts[i].pass != next.current().verdicts[i].pass) throw error("re-verification disagrees");
    }
    std::lock_guard lock(e->m);
    e->session = std::move(next);
    e->error.clear();
    e->busy = false;
    e->set(from_session(*e->session));
    persist(*e);
}

resource_snapshot session_store::start(const std::string& id, session_op op, const std::string& instruction,
                                       bool wait) {
    auto e = find(id);
    resource_status before;
    {
        std::lock_guard lock(e->m);
        if (e->busy) throw conflict("session " + id + " is busy");
        if (!e->session) throw conflict("session " + id + " has no controller yet");
        before = e->status;
        switch (op) {
        case session_op::manual_refine:
            if (e->status != resource_status::fail) throw conflict("manual refinement needs a failing session");
            if (normalize_whitespace(instruction).empty()) throw precondition_error("instruction is empty");
            break;
        case session_op::auto_refine:
            if (e->status == resource_status::unrepresentable) throw conflict("session is unrepresentable");
            break;
        case session_op::prune:
            if (e->status != resource_status::pass) throw conflict("pruning needs a passing session");
            break;
        }
        e->busy = true;
        e->set(resource_status::querying);
    }
    auto job = [this, e, op, instruction, before, wait] {
        try {
            run(e, op, instruction);
        } catch (const std::exception& ex) {
            {
                std::lock_guard lock(e->m);
                e->error = (is_backend_error(ex) ? "backend failure: " : "") + std::string(ex.what());
                e->busy = false;
                e->set(before);
            }
            if (wait) {
                if (is_backend_error(ex)) throw backend_failure(ex.what());
                throw;
            }
        }
    };
    if (wait) {
        job();
    } else {
        launch(job);
    }
    std::lock_guard lock(e->m);
    return e->snapshot();
}

resource_snapshot session_store::get(const std::string& id) const {
    auto e = find(id);
    std::lock_guard lock(e->m);
    return e->snapshot();
}

std::vector<resource_snapshot> session_store::list() const {
    std::vector<std::shared_ptr<entry>> all;
    {
        std::lock_guard lock(_mutex);
        for (const auto& [id, e] : _entries) all.push_back(e);
    }
    std::vector<resource_snapshot> out;
    for (const auto& e : all) {
        std::lock_guard lock(e->m);
        out.push_back(e->snapshot());
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.id.size() != b.id.size() ? a.id.size() < b.id.size() : a.id < b.id;
    });
    return out;
}

void session_store::wait_idle(const std::string& id) const {
    auto e = find(id);
    std::unique_lock lock(e->m);
    e->cv.wait(lock, [&] { return !e->busy; });
}

// Caller holds e.m.
void session_store::persist(const entry& e) const {
    if (_dir.empty() || !e.session) return;
    json meta;
    meta["id"] = e.id;
    meta["revision"] = e.revision;
    meta["backend"] = e.cfg.to_json();
    const auto base = std::filesystem::path(_dir) / e.id;
    write_text_file(base.string() + ".session.json", serialize(*e.session));
    write_text_file(base.string() + ".meta.json", meta.dump(2) + "\n");
}

void session_store::load() {
    for (const auto& f : std::filesystem::directory_iterator(_dir)) {
        const auto name = f.path().filename().string();
        const std::string suffix = ".meta.json";
        if (name.size() <= suffix.size() || !name.ends_with(suffix)) continue;
        const auto id = name.substr(0, name.size() - suffix.size());
        const auto meta = json::parse(read_text_file(f.path().string()));
        auto e = std::make_shared<entry>();
        e->id = id;
        e->cfg = backend_config::from_json(meta.at("backend"), "/backend");
        e->glm = std::make_unique<glm_client>(e->cfg.make());
        e->session = parse_session_document(read_text_file((std::filesystem::path(_dir) / (id + ".session.json")).string()));
        e->revision = meta.at("revision").get<std::uint64_t>();
        e->status = from_session(*e->session);
        _entries[id] = e;
        if (id.size() > 1 && id.front() == 's' && id.find_first_not_of("0123456789", 1) == std::string::npos)
            _next_id = std::max<std::uint64_t>(_next_id, std::stoull(id.substr(1)) + 1);
    }
}

} // namespace taskfsa
