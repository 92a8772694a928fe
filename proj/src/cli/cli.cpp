#include "taskfsa/cli/cli.hpp"

#include "taskfsa/builder/build.hpp"
#include "taskfsa/glm/queries.hpp"
#include "taskfsa/io/documents.hpp"
#include "taskfsa/io/dot.hpp"
#include "taskfsa/refine/render.hpp"
#include "taskfsa/service/server.hpp"
#include "taskfsa/verify/smv.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <iostream>
#include <optional>
#include <pthread.h>

namespace taskfsa {

namespace fs = std::filesystem;

namespace {

class usage_error : public error {
public:
    using error::error;
};

struct backend_flags {
    std::string replay;
    std::string record;
    std::vector<std::string> bias;
};

struct steps_flags {
    std::string task;
    std::size_t depth = 1;
    std::size_t max_depth = 3;
    backend_flags backend;
    std::string out;
};

struct build_flags {
    std::string steps;
    bool layered = false;
    std::string out;
};

struct verify_flags {
    std::string controller;
    std::string model;
    std::vector<std::string> specs;
    std::string smv;
    std::string out;
    bool deadlock_fails = false;
};

struct refine_flags {
    std::string session;
    std::string task;
    std::string model;
    std::vector<std::string> specs;
    std::size_t depth = 1;
    std::size_t max_depth = 3;
    backend_flags backend;
    std::vector<std::string> instructions;
    bool automatic = false;
    bool prune = false;
    std::string out;
};

struct serve_flags {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string store;
};

void add_backend_flags(CLI::App* cmd, backend_flags& f) {
    cmd->add_option("--replay", f.replay, "Answer prompts from a recorded transcript");
    cmd->add_option("--record", f.record, "Write the prompts and completions of this run to a transcript");
    cmd->add_option("--bias", f.bias, "Keyword bias K=V, repeatable");
}

glm_params params_from(const backend_flags& f) {
    auto p = glm_params::defaults();
    for (const auto& kv : f.bias) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw usage_error("--bias expects K=V, got " + kv);
        try {
            std::size_t used = 0;
            const auto value = std::stod(kv.substr(eq + 1), &used);
            if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
            p.keyword_bias[kv.substr(0, eq)] = value;
        } catch (const std::logic_error&) {
            throw usage_error("--bias value is not a number: " + kv);
        }
    }
    return p;
}

std::shared_ptr<glm_backend> make_backend(const backend_flags& f) {
    if (!f.replay.empty()) return std::make_shared<replay_backend>(parse_transcript_document(read_text_file(resolve_transcript_path(f.replay))));
    auto cfg = http_backend_config::from_env();
    if (cfg.endpoint.empty()) throw usage_error("no backend: pass --replay or set TASKFSA_GLM_ENDPOINT");
    return std::make_shared<http_backend>(cfg);
}

void record_transcript(const glm_client& glm, const backend_flags& f, const std::string& out_dir) {
    const auto log = glm.log();
    if (!f.record.empty()) write_text_file(f.record, serialize(log));
    if (!out_dir.empty()) write_text_file((fs::path(out_dir) / "transcript.json").string(), serialize(log));
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) fs::create_directories(dir);
}

std::string out_path(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void check_depths(std::size_t depth, std::size_t max_depth) {
    if (depth == 0 || depth > max_depth) throw usage_error("--depth must be between 1 and --max-depth");
}

// A spec argument is a spec document path or inline LTL text.
std::string load_spec(const std::string& arg) {
    if (fs::is_regular_file(arg)) return parse_spec_document(read_text_file(arg)).ltl;
    (void)parse_ltl(arg);
    return arg;
}

void print_tree(const step_tree& t, std::ostream& out) {
    for (const auto& n : t.nodes()) out << std::string(2 * (n.depth - 1), ' ') << '[' << n.number << "] " << n.text << '\n';
}

void write_controller(const controller& c, const std::string& dir, std::ostream& out) {
    if (dir.empty()) {
        out << serialize(c);
        return;
    }
    ensure_dir(dir);
    write_text_file(out_path(dir, "controller.json"), serialize(c));
    write_text_file(out_path(dir, "controller.dot"), export_dot(c));
    out << "wrote " << out_path(dir, "controller.json") << " and controller.dot (" << c.states.size() << " states)\n";
}

int cmd_steps(const steps_flags& f, std::ostream& out) {
    if (normalize_whitespace(f.task).empty()) throw usage_error("task description is empty");
    check_depths(f.depth, f.max_depth);
    glm_client glm(make_backend(f.backend));
    const auto tree = query_steps(glm, f.task, f.depth, params_from(f.backend));
    if (f.out.empty()) {
        out << serialize(tree);
    } else {
        ensure_dir(f.out);
        write_text_file(out_path(f.out, "steps.json"), serialize(tree));
        print_tree(tree, out);
    }
    record_transcript(glm, f.backend, f.out);
    return exit_pass;
}

int cmd_build(const build_flags& f, std::ostream& out) {
    const auto tree = parse_steps_document(read_text_file(f.steps));
    const auto c = f.layered ? build_layered(tree) : build_steps(tree, tree.leaves()).ctrl;
    write_controller(c, f.out, out);
    return exit_pass;
}

int cmd_verify(const verify_flags& f, std::ostream& out) {
    const auto c = parse_controller_document(read_text_file(f.controller));
    const auto m = parse_model_document(read_text_file(f.model));
    if (f.specs.empty()) throw usage_error("at least one --spec is required");
    ensure_dir(f.out);
    product_options opts;
    opts.deadlock_as_failure = f.deadlock_fails;
    bool all_pass = true;
    std::vector<ltl_formula> parsed;
    for (std::size_t i = 0; i < f.specs.size(); ++i) {
        const auto ltl = load_spec(f.specs[i]);
        const auto spec = parse_ltl(ltl);
        const auto v = check(m, c, spec, opts);
        all_pass = all_pass && v.pass;
        out << (v.pass ? "PASS " : "FAIL ") << ltl << '\n';
        if (v.cex) out << render_counterexample(*v.cex, c);
        if (!f.out.empty())
            write_text_file(out_path(f.out, "verdict-" + std::to_string(i + 1) + ".json"), serialize(verdict_document{ltl, v}));
        parsed.push_back(spec);
    }
    if (!f.smv.empty()) write_text_file(f.smv, export_smv(m, c, parsed));
    return all_pass ? exit_pass : exit_fail;
}

void print_iteration(const refinement_session& s, std::size_t k, std::ostream& out) {
    const auto& it = s.history[k];
    out << "iteration " << k << " (" << iteration_kind_name(it.kind) << "): " << it.ctrl.states.size() << " states\n";
    for (std::size_t i = 0; i < it.verdicts.size(); ++i) {
        out << "  " << (it.verdicts[i].pass ? "PASS " : "FAIL ") << s.specs[i];
        if (it.verdicts[i].cex) out << "  " << it.verdicts[i].cex->projection_text();
        out << '\n';
    }
}

int cmd_refine(const refine_flags& f, std::ostream& out) {
    glm_client glm(make_backend(f.backend));
    refinement_session s;
    if (!f.session.empty()) {
        if (!f.task.empty() || !f.model.empty() || !f.specs.empty())
            throw usage_error("--session cannot be combined with --task, --model or --spec");
        s = parse_session_document(read_text_file(f.session));
    } else {
        if (normalize_whitespace(f.task).empty() || f.model.empty() || f.specs.empty())
            throw usage_error("a new session needs --task, --model and at least one --spec");
        check_depths(f.depth, f.max_depth);
        std::vector<std::string> specs;
        for (const auto& a : f.specs) specs.push_back(load_spec(a));
        session_options opts;
        opts.depth = f.depth;
        opts.max_depth = f.max_depth;
        opts.params = params_from(f.backend);
        s = start_session(f.task, parse_model_document(read_text_file(f.model)), specs, glm, opts);
    }
    auto printed = f.session.empty() ? std::size_t{0} : s.history.size();
    auto flush = [&] {
        for (; printed < s.history.size(); ++printed) print_iteration(s, printed, out);
    };
    flush();
    for (const auto& instr : f.instructions) {
        if (s.status != session_status::fail) {
            out << "skipping instruction, session is " << status_name(s.status) << ": " << instr << '\n';
            continue;
        }
        s = manual_refine(s, instr, glm);
        flush();
    }
    if (f.automatic) {
        s = auto_refine(s, glm);
        flush();
    }
    if (f.prune) {
        if (s.status != session_status::pass) {
            out << "not pruning, session is " << status_name(s.status) << '\n';
        } else {
            s = prune(s, glm);
            flush();
        }
    }
    out << "status: " << status_name(s.status) << '\n';
    if (!f.out.empty()) {
        ensure_dir(f.out);
        write_text_file(out_path(f.out, "session.json"), serialize(s));
        write_text_file(out_path(f.out, "controller.json"), serialize(s.ctrl()));
        write_text_file(out_path(f.out, "controller.dot"), export_dot(s.ctrl()));
        write_text_file(out_path(f.out, "model.dot"), export_dot(s.mdl));
    }
    record_transcript(glm, f.backend, f.out);
    return s.status == session_status::pass ? exit_pass : exit_fail;
}

int cmd_serve(const serve_flags& f, std::ostream& out) {
    // Block the stop signals before any thread starts so only sigwait sees them.
    sigset_t stop_signals;
    sigemptyset(&stop_signals);
    sigaddset(&stop_signals, SIGINT);
    sigaddset(&stop_signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

    session_store store(f.store);
    api_server server(store);
    const int port = server.start(f.host, f.port);
    out << "listening on http://" << f.host << ':' << port << std::endl;
    int sig = 0;
    sigwait(&stop_signals, &sig);
    server.stop();
    out << "stopped" << std::endl;
    return exit_pass;
}

bool is_backend_error(const std::exception& e) {
    return dynamic_cast<const backend_unavailable*>(&e) || dynamic_cast<const replay_miss*>(&e) ||
           dynamic_cast<const malformed_completion*>(&e);
}

} // namespace

std::string resolve_transcript_path(const std::string& path) {
    const fs::path p(path);
    for (const auto& candidate : {p, fs::path(path + ".json"), p.parent_path() / "transcripts" / (p.filename().string() + ".json")}) {
        if (fs::is_regular_file(candidate)) return candidate.string();
    }
    throw usage_error("no transcript at " + path);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app("Turns task descriptions into verified finite-state controllers", "taskfsa");
    app.require_subcommand(1);

    steps_flags sf;
    auto* steps = app.add_subcommand("steps", "Query step instructions for a task");
    steps->add_option("task", sf.task, "Task description")->required();
    steps->add_option("--depth", sf.depth, "Layers to query");
    steps->add_option("--max-depth", sf.max_depth, "Deepest layer allowed");
    steps->add_option("--out", sf.out, "Directory for steps.json and transcript.json");
    add_backend_flags(steps, sf.backend);

    build_flags bf;
    auto* build = app.add_subcommand("build", "Build a controller from a steps document");
    build->add_option("steps", bf.steps, "Steps document")->required();
    build->add_flag("--layered", bf.layered, "Splice substeps into their parent states instead of compiling leaves");
    build->add_option("--out", bf.out, "Directory for controller.json and controller.dot");

    verify_flags vf;
    auto* verify = app.add_subcommand("verify", "Check a controller against specifications in a model");
    verify->add_option("--controller", vf.controller, "Controller document")->required();
    verify->add_option("--model", vf.model, "Model document")->required();
    verify->add_option("--spec", vf.specs, "Spec document or LTL text, repeatable")->required();
    verify->add_option("--smv", vf.smv, "Also write an SMV export");
    verify->add_option("--out", vf.out, "Directory for verdict documents");
    verify->add_flag("--deadlock-fails", vf.deadlock_fails, "Treat runs that get stuck as violations");

    refine_flags rf;
    auto* refine = app.add_subcommand("refine", "Start or continue a refinement session");
    refine->add_option("--session", rf.session, "Session document to continue");
    refine->add_option("--task", rf.task, "Task description for a new session");
    refine->add_option("--model", rf.model, "Model document for a new session");
    refine->add_option("--spec", rf.specs, "Spec document or LTL text, repeatable");
    refine->add_option("--depth", rf.depth, "Layers to query at the start");
    refine->add_option("--max-depth", rf.max_depth, "Deepest layer automatic refinement may reach");
    refine->add_option("--instruction", rf.instructions, "Manual refinement instruction, repeatable, applied in order");
    refine->add_flag("--auto", rf.automatic, "Expand steps until every spec passes");
    refine->add_flag("--prune", rf.prune, "Remove steps that are not needed for the specs");
    refine->add_option("--out", rf.out, "Directory for session, controller and DOT files");
    add_backend_flags(refine, rf.backend);

    serve_flags vsf;
    auto* serve = app.add_subcommand("serve", "Run the HTTP session API");
    serve->add_option("--host", vsf.host, "Address to bind");
    serve->add_option("--port", vsf.port, "Port to bind, 0 picks a free one");
    serve->add_option("--store", vsf.store, "Directory that mirrors sessions");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_pass : exit_usage;
    }

    try {
        if (*steps) return cmd_steps(sf, out);
        if (*build) return cmd_build(bf, out);
        if (*verify) return cmd_verify(vf, out);
        if (*refine) return cmd_refine(rf, out);
        if (*serve) return cmd_serve(vsf, out);
    } catch (const std::exception& e) {
        if (is_backend_error(e)) {
            err << "backend error: " << e.what() << '\n';
            return exit_backend;
        }
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

} // namespace taskfsa
