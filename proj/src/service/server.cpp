#include "taskfsa/service/server.hpp"

#include "taskfsa/io/dot.hpp"
#include "taskfsa/refine/render.hpp"

#include <httplib.h>

#include <thread>

namespace taskfsa {

json session_view(const resource_snapshot& s) {
    json j;
    j["id"] = s.id;
    j["revision"] = s.revision;
    j["status"] = resource_status_name(s.status);
    j["busy"] = s.busy;
    j["error"] = s.error;
    if (!s.session) {
        j["session"] = nullptr;
        j["dot"] = nullptr;
        j["counterexamples"] = json::array();
        return j;
    }
    const auto& sess = *s.session;
    j["session"] = to_json(sess);
    json dot;
    dot["controller"] = export_dot(sess.ctrl());
    dot["model"] = export_dot(sess.mdl);
    j["dot"] = std::move(dot);
    json cexs = json::array();
    const auto& verdicts = sess.current().verdicts;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        json c;
        c["spec"] = sess.specs[i];
        c["pass"] = verdicts[i].pass;
        c["projection"] = verdicts[i].cex ? json(verdicts[i].cex->projection_text()) : json(nullptr);
        c["table"] = verdicts[i].cex ? json(render_counterexample(*verdicts[i].cex, sess.ctrl())) : json(nullptr);
        cexs.push_back(std::move(c));
    }
    j["counterexamples"] = std::move(cexs);
    return j;
}

namespace {

void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
    json j;
    j["error"] = message;
    reply(res, status, j);
}

bool wants_wait(const httplib::Request& req) {
    if (!req.has_param("wait")) return false;
    const auto v = req.get_param_value("wait");
    return v == "1" || v == "true";
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        return json::parse(req.body);
    } catch (const json::exception& e) {
        throw schema_error("", std::string("body is not valid JSON: ") + e.what());
    }
}

// Maps library errors onto status codes.
template <class Fn>
void guarded(httplib::Response& res, Fn&& fn) {
    try {
        fn();
    } catch (const not_found& e) {
        reply_error(res, 404, e.what());
    } catch (const conflict& e) {
        reply_error(res, 409, e.what());
    } catch (const backend_failure& e) {
        reply_error(res, 502, std::string("backend failure: ") + e.what());
    } catch (const schema_error& e) {
        json j;
        j["error"] = e.what();
        j["path"] = e.path();
        reply(res, 400, j);
    } catch (const precondition_error& e) {
        reply_error(res, 400, e.what());
    } catch (const syntax_error& e) {
        reply_error(res, 400, e.what());
    } catch (const error& e) {
        reply_error(res, 422, e.what());
    }
}

std::vector<std::string> specs_from(const json& body) {
    const auto it = body.find("specs");
    if (it == body.end() || !it->is_array() || it->empty()) throw schema_error("/specs", "expected a non-empty array");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < it->size(); ++i) {
        const auto& s = (*it)[i];
        const auto path = "/specs/" + std::to_string(i);
        std::string ltl;
        if (s.is_string()) {
            ltl = s.get<std::string>();
        } else if (s.is_object()) {
            ltl = parse_spec_document(s.dump()).ltl;
        } else {
            throw schema_error(path, "expected an LTL string or a spec document");
        }
        try {
            (void)parse_ltl(ltl);
        } catch (const syntax_error& e) {
            throw schema_error(path, e.what());
        }
        out.push_back(std::move(ltl));
    }
    return out;
}

std::size_t count_field(const json& body, const char* key, std::size_t fallback) {
    const auto it = body.find(key);
    if (it == body.end()) return fallback;
    if (!it->is_number_unsigned()) throw schema_error(std::string("/") + key, "expected a positive integer");
    return it->get<std::size_t>();
}

} // namespace

struct api_server::impl {
    session_store& store;
    httplib::Server http;
    std::thread thread;

    explicit impl(session_store& s) : store(s) { routes(); }

    void routes() {
        http.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
            json j;
            j["status"] = "ok";
            reply(res, 200, j);
        });

        http.Get("/sessions", [this](const httplib::Request&, httplib::Response& res) {
            guarded(res, [&] {
                json arr = json::array();
                for (const auto& s : store.list()) {
                    json o;
                    o["id"] = s.id;
                    o["task"] = s.session ? json(s.session->task) : json(nullptr);
                    o["status"] = resource_status_name(s.status);
                    o["revision"] = s.revision;
                    o["busy"] = s.busy;
                    arr.push_back(std::move(o));
                }
                json j;
                j["sessions"] = std::move(arr);
                reply(res, 200, j);
            });
        });

        http.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                const auto body = parse_body(req);
                const auto task = body.find("task");
                if (task == body.end() || !task->is_string()) throw schema_error("/task", "expected a string");
                const auto m = body.find("model");
                if (m == body.end() || !m->is_object()) throw schema_error("/model", "expected a model document");
                const auto mdl = parse_model_document(m->dump());
                const auto b = body.find("backend");
                if (b == body.end()) throw schema_error("/backend", "missing field");
                const auto cfg = backend_config::from_json(*b, "/backend");
                session_options opts;
                opts.depth = count_field(body, "depth", 1);
                opts.max_depth = count_field(body, "max_depth", 3);
                const bool wait = wants_wait(req);
                const auto id = store.create(task->get<std::string>(), mdl, specs_from(body), cfg, opts, wait);
                reply(res, wait ? 201 : 202, session_view(store.get(id)));
            });
        });

        http.Get(R"(/sessions/([A-Za-z0-9_-]+))", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { reply(res, 200, session_view(store.get(req.matches[1]))); });
        });

        auto op_route = [this](session_op op) {
            return [this, op](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                    std::string instruction;
                    if (op == session_op::manual_refine) {
                        const auto body = parse_body(req);
                        const auto it = body.find("instruction");
                        if (it == body.end() || !it->is_string())
                            throw schema_error("/instruction", "expected a string");
                        instruction = it->get<std::string>();
                    }
                    const bool wait = wants_wait(req);
                    const auto snap = store.start(req.matches[1], op, instruction, wait);
                    reply(res, wait ? 200 : 202, session_view(wait ? store.get(req.matches[1]) : snap));
                });
            };
        };
        http.Post(R"(/sessions/([A-Za-z0-9_-]+)/refine-manual)", op_route(session_op::manual_refine));
        http.Post(R"(/sessions/([A-Za-z0-9_-]+)/refine-auto)", op_route(session_op::auto_refine));
        http.Post(R"(/sessions/([A-Za-z0-9_-]+)/prune)", op_route(session_op::prune));

        http.Get(R"(/sessions/([A-Za-z0-9_-]+)/dot/([a-z]+))", [this](const httplib::Request& req,
                                                                        httplib::Response& res) {
            guarded(res, [&] {
                const auto snap = store.get(req.matches[1]);
                const std::string artifact = req.matches[2];
                if (artifact != "controller" && artifact != "model") throw not_found("no artifact " + artifact);
                if (!snap.session) throw not_found("session " + snap.id + " has no controller yet");
                const auto& s = *snap.session;
                std::size_t index = s.history.size() - 1;
                if (req.has_param("iteration")) {
                    const auto v = req.get_param_value("iteration");
                    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
                        throw precondition_error("iteration must be a number");
                    index = std::stoul(v);
                    if (index >= s.history.size()) throw not_found("no iteration " + v);
                }
                res.status = 200;
                res.set_content(artifact == "controller" ? export_dot(s.history[index].ctrl) : export_dot(s.mdl),
                                "text/vnd.graphviz");
            });
        });
    }
};

api_server::api_server(session_store& store) : _impl(std::make_unique<impl>(store)) {}

api_server::~api_server() { stop(); }

int api_server::start(const std::string& host, int port) {
    const int bound = port == 0 ? _impl->http.bind_to_any_port(host) : (_impl->http.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw precondition_error("cannot bind " + host + ":" + std::to_string(port));
    _impl->thread = std::thread([this] { _impl->http.listen_after_bind(); });
    _impl->http.wait_until_ready();
    return bound;
}

bool api_server::run(const std::string& host, int port) { return _impl->http.listen(host, port); }

void api_server::stop() {
    _impl->http.stop();
    if (_impl->thread.joinable()) _impl->thread.join();
}

} // namespace taskfsa
