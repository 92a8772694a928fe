#include "support.hpp"

#include "taskfsa/service/server.hpp"

#include <doctest.h>
#include <httplib.h>

#include <atomic>
#include <filesystem>
#include <future>

using namespace taskfsa;
using namespace taskfsa::testing;

namespace {

const std::string light_task = "Cross the road at the traffic light";
const std::string first_instruction = "with an action \"approach pedestrian crossing\"";

json light_request() {
    json body;
    body["task"] = light_task;
    body["model"] = json::parse(serialize(load_model("crossroad_light")));
    body["specs"] = json::array({load_spec("crossroad_light")});
    body["backend"] = {{"kind", "replay"},
                       {"transcript", json::parse(serialize(load_transcript("crossroad_light")))}};
    return body;
}

backend_config light_backend() {
    backend_config cfg;
    cfg.replay = load_transcript("crossroad_light");
    return cfg;
}

// A live completion endpoint that answers from a recorded transcript once released.
struct gated_endpoint {
    httplib::Server http;
    std::thread thread;
    int port = 0;
    std::promise<void> gate;
    std::shared_future<void> opened = gate.get_future().share();
    std::atomic<int> hits{0};

    explicit gated_endpoint(const transcript& t) {
        http.Post("/v1/completions", [this, t](const httplib::Request& req, httplib::Response& res) {
            ++hits;
            opened.wait();
            glm_client replay(std::make_shared<replay_backend>(t));
            json answer;
            answer["completion"] = replay.complete({json::parse(req.body).at("prompt").get<std::string>()});
            res.set_content(answer.dump(), "application/json");
        });
        port = http.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { http.listen_after_bind(); });
        http.wait_until_ready();
    }
    ~gated_endpoint() {
        release();
        http.stop();
        thread.join();
    }
    void release() {
        try {
            gate.set_value();
        } catch (const std::future_error&) {
        }
    }
    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port) + "/v1/completions"; }
};

struct running_server {
    session_store store;
    api_server server{store};
    int port = 0;
    std::unique_ptr<httplib::Client> http;

    explicit running_server(std::string dir = {}) : store(std::move(dir)) {
        port = server.start("127.0.0.1", 0);
        http = std::make_unique<httplib::Client>("127.0.0.1", port);
        http->set_read_timeout(30, 0);
    }

    std::pair<int, json> post(const std::string& path, const json& body) {
        auto r = http->Post(path, body.dump(), "application/json");
        REQUIRE(r);
        return {r->status, json::parse(r->body)};
    }
    std::pair<int, json> get(const std::string& path) {
        auto r = http->Get(path);
        REQUIRE(r);
        return {r->status, r->get_header_value("Content-Type").rfind("application/json", 0) == 0
                               ? json::parse(r->body)
                               : json(r->body)};
    }
};

json poll_until_idle(running_server& s, const std::string& id) {
    for (int i = 0; i < 500; ++i) {
        const auto [status, body] = s.get("/sessions/" + id);
        REQUIRE(status == 200);
        if (!body.at("busy").get<bool>()) return body;
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    FAIL("session never became idle");
    return {};
}

} // namespace

TEST_CASE("session store drives the refinement loop") {
    session_store store;
    const auto id = store.create(light_task, load_model("crossroad_light"), {load_spec("crossroad_light")},
                                 light_backend(), {}, true);
    auto snap = store.get(id);
    CHECK(snap.status == resource_status::fail);
    REQUIRE(snap.session);
    CHECK(snap.session->current().verdicts.front().cex->projection_text() == "loop(p0)");
    const auto rev0 = snap.revision;

    CHECK_THROWS_AS((void)store.start(id, session_op::prune, "", true), conflict);
    CHECK_THROWS_AS((void)store.start(id, session_op::manual_refine, "   ", true), precondition_error);
    CHECK_THROWS_AS((void)store.get("s999"), not_found);

    (void)store.start(id, session_op::manual_refine, first_instruction, true);
    snap = store.get(id);
    CHECK(snap.revision > rev0);
    CHECK(snap.status == resource_status::fail);
    CHECK(snap.session->current().verdicts.front().cex->projection_text() == "p0 → p1 → p3 → loop(p5)");

    // A failed backend call leaves the session as it was.
    const auto before = *snap.session;
    CHECK_THROWS_AS((void)store.start(id, session_op::manual_refine, "an unrecorded instruction", true),
                    backend_failure);
    snap = store.get(id);
    CHECK(*snap.session == before);
    CHECK(snap.status == resource_status::fail);
    CHECK_FALSE(snap.error.empty());
    CHECK(store.list().size() == 1);
}

TEST_CASE("HTTP API") {
    running_server s;
    CHECK(s.get("/healthz").first == 200);

    auto [created, view] = s.post("/sessions?wait=1", light_request());
    REQUIRE(created == 201);
    const auto id = view.at("id").get<std::string>();
    CHECK(view.at("status") == "fail");
    CHECK(view.at("counterexamples")[0].at("projection") == "loop(p0)");
    CHECK(view.at("dot").at("controller").get<std::string>().rfind("digraph controller", 0) == 0);
    std::uint64_t revision = view.at("revision").get<std::uint64_t>();

    auto [refined, after] = s.post("/sessions/" + id + "/refine-manual?wait=1", {{"instruction", first_instruction}});
    CHECK(refined == 200);
    CHECK(after.at("revision").get<std::uint64_t>() > revision);
    revision = after.at("revision").get<std::uint64_t>();
    CHECK(after.at("counterexamples")[0].at("projection") == "p0 → p1 → p3 → loop(p5)");
    CHECK(after.at("session").at("history").size() == 2);

    CHECK(s.get("/sessions/nope").first == 404);
    CHECK(s.post("/sessions/nope/prune", json::object()).first == 404);
    CHECK(s.post("/sessions/" + id + "/prune", json::object()).first == 409);
    CHECK(s.post("/sessions/" + id + "/refine-manual?wait=1", {{"instruction", "never recorded"}}).first == 502);
    CHECK(s.post("/sessions/" + id + "/refine-manual", json::object()).first == 400);
    CHECK(s.get("/sessions/" + id).second.at("revision").get<std::uint64_t>() >= revision);

    auto bad = light_request();
    bad["specs"] = json::array({"F ("});
    CHECK(s.post("/sessions", bad).first == 400);
    bad = light_request();
    bad.erase("model");
    const auto [missing, why] = s.post("/sessions", bad);
    CHECK(missing == 400);
    CHECK(why.at("path") == "/model");

    const auto [dot_status, dot] = s.get("/sessions/" + id + "/dot/controller?iteration=0");
    CHECK(dot_status == 200);
    CHECK(dot_problems(dot.get<std::string>()).empty());
    CHECK(s.get("/sessions/" + id + "/dot/model").first == 200);
    CHECK(s.get("/sessions/" + id + "/dot/controller?iteration=9").first == 404);
    CHECK(s.get("/sessions/" + id + "/dot/other").first == 404);

    const auto [listed, all] = s.get("/sessions");
    CHECK(listed == 200);
    CHECK(all.at("sessions").size() == 1);
}

TEST_CASE("asynchronous operations report progress and never go back in revision") {
    gated_endpoint glm(load_transcript("crossroad_light"));
    running_server s;
    auto body = light_request();
    body["backend"] = {{"kind", "live"}, {"endpoint", glm.endpoint()}};

    auto [accepted, view] = s.post("/sessions", body);
    REQUIRE(accepted == 202);
    const auto id = view.at("id").get<std::string>();
    CHECK(view.at("status") == "querying");
    CHECK(view.at("busy") == true);
    CHECK(s.post("/sessions/" + id + "/refine-auto", json::object()).first == 409);

    std::uint64_t last = view.at("revision").get<std::uint64_t>();
    glm.release();
    json final_view;
    for (int i = 0; i < 500; ++i) {
        const auto [status, v] = s.get("/sessions/" + id);
        REQUIRE(status == 200);
        const auto rev = v.at("revision").get<std::uint64_t>();
        CHECK(rev >= last);
        last = rev;
        if (!v.at("busy").get<bool>()) {
            final_view = v;
            break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    REQUIRE(final_view.is_object());
    CHECK(final_view.at("status") == "fail");
    CHECK(final_view.at("counterexamples")[0].at("projection") == "loop(p0)");

    auto [started, pending] = s.post("/sessions/" + id + "/refine-manual", {{"instruction", first_instruction}});
    CHECK(started == 202);
    CHECK(pending.at("revision").get<std::uint64_t>() > last);
    const auto done = poll_until_idle(s, id);
    CHECK(done.at("counterexamples")[0].at("projection") == "p0 → p1 → p3 → loop(p5)");
    CHECK(glm.hits > 0);
}

TEST_CASE("same requests against a fresh store give the same result") {
    auto run = [] {
        running_server s;
        const auto id = s.post("/sessions?wait=1", light_request()).second.at("id").get<std::string>();
        (void)s.post("/sessions/" + id + "/refine-manual?wait=1", {{"instruction", first_instruction}});
        auto v = s.get("/sessions/" + id).second;
        return v;
    };
    CHECK(run() == run());
}

TEST_CASE("sessions persist across restarts") {
    const auto dir = std::filesystem::temp_directory_path() / "taskfsa_service_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    json before;
    {
        running_server s(dir.string());
        const auto id = s.post("/sessions?wait=1", light_request()).second.at("id").get<std::string>();
        before = s.post("/sessions/" + id + "/refine-manual?wait=1", {{"instruction", first_instruction}}).second;
    }
    {
        running_server s(dir.string());
        const auto [status, after] = s.get("/sessions/" + before.at("id").get<std::string>());
        CHECK(status == 200);
        CHECK(after == before);
        // New ids do not reuse persisted ones.
        const auto fresh = s.post("/sessions?wait=1", light_request()).second.at("id").get<std::string>();
        CHECK(fresh != before.at("id").get<std::string>());
    }
    std::filesystem::remove_all(dir);
}
