// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#include "support.hpp"

#include "taskfsa/builder/build.hpp"
#include "taskfsa/cli/cli.hpp"
#include "taskfsa/io/dot.hpp"
#include "taskfsa/stepparse/parse.hpp"
#include "taskfsa/verify/smv.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

using namespace taskfsa;
using namespace taskfsa::testing;
namespace fs = std::filesystem;

namespace {

struct outcome {
    bool ok = true;
    std::string detail;
    void fail(const std::string& why) {
        if (ok) detail.clear();
        ok = false;
        detail += (detail.empty() ? "" : "; ") + why;
    }
};

struct criterion {
    int number;
    std::string title;
    double limit_seconds;
    std::function<outcome()> body;
};

// ---- 1: grammar rows ----

outcome grammar_rows() {
    outcome o;
    struct row {
        std::vector<std::string> sentences;
        rule_kind expected;
    };
    const std::vector<row> rows = {
        {{"Dial the number."}, rule_kind::default_rule},
        {{"Proceed to [1]."}, rule_kind::direct},
        {{"If there are no cars, cross the road."}, rule_kind::conditional},
        {{"If there are no cars, cross the road.", "If there are cars, stay."}, rule_kind::conditional_else},
        {{"Wait for the car to pass, then cross the road."}, rule_kind::self_wait},
        {{"Stay until the car passes."}, rule_kind::self_until},
    };
    std::size_t hits = 0;
    for (const auto& r : rows) {
        std::vector<std::pair<std::string, std::string>> numbered;
        for (std::size_t i = 0; i < r.sentences.size(); ++i) numbered.emplace_back(std::to_string(i + 1), r.sentences[i]);
        const auto parsed = parse_steps(numbered);
        if (!parsed.empty() && parsed.front().rule == r.expected) {
            ++hits;
        } else {
            o.fail("\"" + r.sentences.front() + "\" classified as " +
                   (parsed.empty() ? std::string("nothing") : std::string(rule_name(parsed.front().rule))));
        }
    }
    if (o.ok) o.detail = std::to_string(hits) + "/6 rows";
    return o;
}

// ---- 2: controller reproduction ----

outcome reproduction() {
    outcome o;
    const std::vector<std::pair<std::string, std::size_t>> targets = {
        {"crossroad_merged", 7},        {"crossroad_substeps", 10}, {"dental_layered", 11},
        {"mpc_layered", 13},            {"crossroad_light_initial", 4}, {"wifi_initial", 8}};
    std::size_t hits = 0;
    for (const auto& [name, states] : targets) {
        const auto c = built_for(name);
        if (c.states.size() != states) {
            o.fail(name + " has " + std::to_string(c.states.size()) + " states, expected " + std::to_string(states));
        } else if (const auto why = mismatch(c, name)) {
            o.fail(name + ": " + *why);
        } else {
            ++hits;
        }
    }
    if (o.ok) o.detail = std::to_string(hits) + "/6 isomorphic";
    return o;
}

// ---- 3: verdicts ----

std::string projection_of(const verdict& v) { return v.cex ? v.cex->projection_text() : "PASS"; }

outcome verdicts() {
    outcome o;
    auto expect = [&](const std::string& what, const verdict& v, const std::string& want) {
        const auto got = projection_of(v);
        if (want == "FAIL" ? v.pass : got != want) o.fail(what + ": got " + got + ", expected " + want);
    };
    const auto light = crossroad_light_history();
    const auto m7 = load_model("crossroad_light");
    const auto phi1 = parse_ltl(load_spec("crossroad_light"));
    expect("7b", check(m7, light[0].ctrl(), phi1), "loop(p0)");
    expect("7c", check(m7, light[1].ctrl(), phi1), "p0 → p1 → p3 → loop(p5)");
    expect("7d", check(m7, light[2].ctrl(), phi1), "PASS");

    const auto cross = crossroad_history();
    const auto m8 = load_model("crossroad");
    const auto phi2 = parse_ltl(load_spec("crossroad"));
    expect("8b", check(m8, cross[0].ctrl(), phi2), "FAIL");
    expect("8c", check(m8, cross[2].ctrl(), phi2), "PASS");

    const auto wifi = wifi_history();
    const auto mw = load_model("wifi");
    const auto reach = parse_ltl(load_spec("wifi"));
    expect("wifi initial", check(mw, wifi[0].ctrl(), reach), "p0 → p1 → p2 → loop(p5)");
    expect("wifi refinement 1", check(mw, wifi[1].ctrl(), reach), "p0 → p1 → p2 → p3 → p4 → loop(p5)");
    expect("wifi refinement 2", check(mw, wifi[2].ctrl(), reach), "PASS");
    if (o.ok) o.detail = "8/8 verdicts and projections";
    return o;
}

// ---- 4: refinement loops ----

outcome refinement_loops() {
    outcome o;
    auto first_pass = [](const std::vector<refinement_session>& h) -> std::size_t {
        for (std::size_t k = 0; k < h.size(); ++k) {
            if (h[k].status == session_status::pass) return k + 1;
        }
        return 0;
    };
    const auto light = crossroad_light_history();
    if (const auto k = first_pass(light); k != 3) o.fail("cross-road passes at iteration " + std::to_string(k));
    const auto wifi = wifi_history();
    if (const auto k = first_pass(wifi); k != 3) o.fail("wifi passes after " + std::to_string(k - 1) + " refinements");

    const auto cross = crossroad_history();
    if (cross[1].current().kind != iteration_kind::automatic) o.fail("second crossing iteration is not automatic");
    if (cross[2].status != session_status::pass) o.fail("pruned crossing controller does not pass");
    if (const auto why = mismatch(cross[2].ctrl(), "crossroad_pruned")) o.fail("pruned: " + *why);
    if (o.ok) o.detail = "cross-road iteration 3, wifi 2 refinements, pruned controller isomorphic";
    return o;
}

// ---- 5: checker against the brute-force oracle ----

constexpr std::size_t oracle_instances = 500;
constexpr std::size_t oracle_bound_cap = 10;

outcome checker_oracle() {
    outcome o;
    rng r(20240501);
    std::size_t fails = 0;
    for (std::size_t i = 0; i < oracle_instances; ++i) {
        const auto inst = random_check_instance(r);
        const auto prod = build_product(inst.mdl, inst.ctrl);
        const auto got = check_product(prod, inst.spec);
        const auto [stem, loop] = oracle_bounds(prod, got, oracle_bound_cap);
        const auto oracle = brute_force_product(prod, inst.spec, stem, loop);
        if (got.pass != oracle.pass) {
            o.fail("instance " + std::to_string(i) + " (" + to_text(inst.spec) + "): check " +
                   (got.pass ? "PASS" : "FAIL") + ", oracle " + (oracle.pass ? "PASS" : "FAIL"));
            continue;
        }
        if (!got.pass) {
            ++fails;
            if (!counterexample_valid(prod, *got.cex)) o.fail("instance " + std::to_string(i) + ": lasso does not replay");
            if (oracle_holds(inst.spec, got.cex->stem_word(), got.cex->loop_word()))
                o.fail("instance " + std::to_string(i) + ": lasso satisfies the spec");
        }
    }
    if (o.ok) {
        o.detail = std::to_string(oracle_instances) + "/" + std::to_string(oracle_instances) + " agree (" +
                   std::to_string(fails) + " fail, all replay and violate)";
    }
    return o;
}

// ---- 6: automaton against lasso semantics, exhaustively ----

// Truth of every subformula at one position, and which automaton states accept
// from there. Stems are prepended one letter at a time, so the whole set of
// lassos with stem and loop up to four letters is covered with shared work.
class lasso_sweep {
public:
    lasso_sweep(const ltl_formula& f, const buchi_automaton& a) : _a(a) {
        collect(f);
        std::set<std::string> atoms = f.atoms();
        atoms.insert(a.atoms.begin(), a.atoms.end());
        _atoms.assign(atoms.begin(), atoms.end());
        for (std::size_t mask = 0; mask < (std::size_t{1} << _atoms.size()); ++mask) {
            valuation v;
            for (std::size_t i = 0; i < _atoms.size(); ++i) {
                if (mask & (std::size_t{1} << i)) v.insert(_atoms[i]);
            }
            _letters.push_back(v);
        }
        if (a.state_count > 64) throw std::runtime_error("automaton too large for the sweep");
        _pre.assign(_letters.size(), std::vector<std::uint64_t>(a.state_count, 0));
        for (std::size_t x = 0; x < _letters.size(); ++x) {
            for (const auto& e : a.edges) {
                if (e.guard.eval(_letters[x])) _pre[x][e.to] |= std::uint64_t{1} << e.from;
            }
        }
        for (auto q : a.initial) _initial |= std::uint64_t{1} << q;
    }

    // Runs every lasso with |stem| <= max_stem and 1 <= |loop| <= max_loop.
    // Returns the number of lassos checked; stops at the first disagreement.
    std::size_t run(std::size_t max_stem, std::size_t max_loop, std::vector<std::size_t>& bad_stem,
                    std::vector<std::size_t>& bad_loop) {
        std::size_t checked = 0;
        std::vector<std::size_t> loop;
        std::function<bool()> each_loop = [&]() -> bool {
            if (!loop.empty()) {
                const auto [truth, acc] = loop_start(loop);
                std::vector<std::size_t> stem;
                std::function<bool(const std::vector<bool>&, std::uint64_t)> each_stem =
                    [&](const std::vector<bool>& t, std::uint64_t q) -> bool {
                    ++checked;
                    if (t.back() != ((q & _initial) != 0)) {
                        bad_stem.assign(stem.rbegin(), stem.rend());
                        bad_loop = loop;
                        return false;
                    }
                    if (stem.size() == max_stem) return true;
                    for (std::size_t x = 0; x < _letters.size(); ++x) {
                        stem.push_back(x);
                        const bool ok = each_stem(step(x, t), pre(x, q));
                        stem.pop_back();
                        if (!ok) return false;
                    }
                    return true;
                };
                if (!each_stem(truth, acc)) return false;
            }
            if (loop.size() == max_loop) return true;
            for (std::size_t x = 0; x < _letters.size(); ++x) {
                loop.push_back(x);
                const bool ok = each_loop();
                loop.pop_back();
                if (!ok) return false;
            }
            return true;
        };
        each_loop();
        return checked;
    }

    [[nodiscard]] const valuation& letter(std::size_t x) const { return _letters[x]; }

private:
    using op = ltl_formula::op;

    struct node {
        op kind;
        std::string name;
        std::size_t lhs = 0, rhs = 0;
    };

    // Post-order, so children come before parents and the root is last.
    std::size_t collect(const ltl_formula& f) {
        node n{f.type(), f.type() == op::atom ? f.name() : std::string()};
        if (f.arity() >= 1) n.lhs = collect(f.lhs());
        if (f.arity() == 2) n.rhs = collect(f.rhs());
        _nodes.push_back(n);
        return _nodes.size() - 1;
    }

    // One-step expansion: truths at a position from its letter and the next position's truths.
    [[nodiscard]] std::vector<bool> step(std::size_t x, const std::vector<bool>& next) const {
        std::vector<bool> t(_nodes.size());
        const auto& v = _letters[x];
        for (std::size_t i = 0; i < _nodes.size(); ++i) {
            const auto& n = _nodes[i];
            switch (n.kind) {
            case op::truth: t[i] = true; break;
            case op::falsity: t[i] = false; break;
            case op::atom: t[i] = v.count(n.name) != 0; break;
            case op::negation: t[i] = !t[n.lhs]; break;
            case op::conjunction: t[i] = t[n.lhs] && t[n.rhs]; break;
            case op::disjunction: t[i] = t[n.lhs] || t[n.rhs]; break;
            case op::implication: t[i] = !t[n.lhs] || t[n.rhs]; break;
            case op::next: t[i] = next[n.lhs]; break;
            case op::until: t[i] = t[n.rhs] || (t[n.lhs] && next[i]); break;
            case op::release: t[i] = t[n.rhs] && (t[n.lhs] || next[i]); break;
            case op::eventually: t[i] = t[n.lhs] || next[i]; break;
            case op::always: t[i] = t[n.lhs] && next[i]; break;
            }
        }
        return t;
    }

    [[nodiscard]] std::uint64_t pre(std::size_t x, std::uint64_t q) const {
        std::uint64_t out = 0;
        for (std::size_t s = 0; q; ++s, q >>= 1) {
            if (q & 1) out |= _pre[x][s];
        }
        return out;
    }

    // Truths at loop position 0 by fixpoint over the loop, and the automaton
    // states with an accepting run on loop^ω.
    [[nodiscard]] std::pair<std::vector<bool>, std::uint64_t> loop_start(const std::vector<std::size_t>& loop) const {
        const std::size_t n = loop.size();
        std::vector<std::vector<bool>> t(n, std::vector<bool>(_nodes.size()));
        for (std::size_t i = 0; i < _nodes.size(); ++i) {
            const auto kind = _nodes[i].kind;
            const bool greatest = kind == op::release || kind == op::always;
            const bool temporal = greatest || kind == op::until || kind == op::eventually;
            for (std::size_t p = 0; p < n; ++p) t[p][i] = greatest;
            // Children are final; node i depends on itself one position later only.
            for (std::size_t round = 0; round < (temporal ? n + 1 : 1); ++round) {
                for (std::size_t k = n; k-- > 0;) t[k][i] = step(loop[k], t[(k + 1) % n])[i];
            }
        }

        // Product of automaton and loop positions; a node accepts if it reaches an accepting cycle.
        const std::size_t states = _a.state_count;
        const std::size_t total = states * n;
        std::vector<std::vector<std::size_t>> succ(total);
        for (const auto& e : _a.edges) {
            for (std::size_t p = 0; p < n; ++p) {
                if (e.guard.eval(_letters[loop[p]])) succ[e.from * n + p].push_back(e.to * n + (p + 1) % n);
            }
        }
        auto reach = [&](std::size_t from) {
            std::vector<bool> seen(total, false);
            std::vector<std::size_t> stack{from};
            while (!stack.empty()) {
                const auto v = stack.back();
                stack.pop_back();
                for (auto w : succ[v]) {
                    if (!seen[w]) {
                        seen[w] = true;
                        stack.push_back(w);
                    }
                }
            }
            return seen;
        };
        std::vector<bool> good(total, false);
        for (std::size_t v = 0; v < total; ++v) {
            if (_a.accepting[v / n] && reach(v)[v]) good[v] = true;
        }
        std::uint64_t acc = 0;
        for (std::size_t q = 0; q < states; ++q) {
            const auto seen = reach(q * n);
            for (std::size_t v = 0; v < total; ++v) {
                if (good[v] && (seen[v] || v == q * n)) {
                    acc |= std::uint64_t{1} << q;
                    break;
                }
            }
        }
        return {t[0], acc};
    }

    const buchi_automaton& _a;
    std::vector<node> _nodes;
    std::vector<std::string> _atoms;
    std::vector<valuation> _letters;
    std::vector<std::vector<std::uint64_t>> _pre;
    std::uint64_t _initial = 0;
};

constexpr std::size_t translation_formulas = 200;
constexpr std::size_t lasso_bound = 4;

outcome translation_oracle() {
    outcome o;
    rng r(7031);
    const std::vector<std::string> atoms = {"a", "b", "c"};
    std::size_t lassos = 0;
    for (std::size_t i = 0; i < translation_formulas && o.ok; ++i) {
        const auto f = random_ltl(r, atoms, 6);
        const auto a = to_buchi(f);
        lasso_sweep sweep(f, a);
        std::vector<std::size_t> stem, loop;
        lassos += sweep.run(lasso_bound, lasso_bound, stem, loop);
        if (!loop.empty()) {
            o.fail("formula " + to_text(f) + " disagrees on a lasso with stem " + std::to_string(stem.size()) +
                   " and loop " + std::to_string(loop.size()));
            break;
        }
        // The sweep itself is checked against the position-fixpoint and product oracles on samples.
        for (int k = 0; k < 20; ++k) {
            std::vector<valuation> s(r() % (lasso_bound + 1)), l(1 + r() % lasso_bound);
            for (auto& v : s) v = random_valuation(r, atoms);
            for (auto& v : l) v = random_valuation(r, atoms);
            if (oracle_holds(f, s, l) != oracle_accepts(a, s, l)) {
                o.fail("formula " + to_text(f) + " disagrees with the reference oracles");
                break;
            }
        }
    }
    if (o.ok) {
        o.detail = std::to_string(translation_formulas) + " formulas, " + std::to_string(lassos) +
                   " lassos, all agree";
    }
    return o;
}

// ---- 7: SMV export ----

outcome smv_exports() {
    outcome o;
    struct study {
        std::string name;
        controller ctrl;
        bool expect_pass;
    };
    const std::vector<study> studies = {
        {"crossroad_light", crossroad_light_history()[2].ctrl(), true},
        {"crossroad", crossroad_history()[2].ctrl(), true},
        {"wifi", wifi_history()[2].ctrl(), true},
    };
    const bool have_nusmv = std::system("command -v NuSMV >/dev/null 2>&1") == 0;
    const auto dir = fs::temp_directory_path() / "taskfsa_acceptance_smv";
    fs::create_directories(dir);
    for (const auto& s : studies) {
        const auto text = export_smv(load_model(s.name), s.ctrl, parse_ltl(load_spec(s.name)));
        const auto report = validate_smv(text);
        if (!report.ok) {
            o.fail(s.name + ": " + (report.errors.empty() ? std::string("invalid") : report.errors.front()));
            continue;
        }
        if (have_nusmv) {
            const auto path = (dir / (s.name + ".smv")).string();
            write_text_file(path, text);
            const auto out = (dir / (s.name + ".out")).string();
            if (std::system(("NuSMV " + path + " > " + out + " 2>&1").c_str()) != 0) o.fail(s.name + ": NuSMV failed");
            const auto log = read_text_file(out);
            const bool says_true = log.find("is true") != std::string::npos;
            if (says_true != s.expect_pass) o.fail(s.name + ": NuSMV verdict differs");
        }
    }
    fs::remove_all(dir);
    if (o.ok) o.detail = std::string("3/3 exports valid") + (have_nusmv ? ", NuSMV agrees" : ", NuSMV not installed");
    return o;
}

// ---- 8: determinism ----

std::map<std::string, std::string> pipeline_run(const fs::path& dir) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto fx = [](const std::string& rel) { return fixture_path(rel); };
    const std::vector<std::vector<std::string>> runs = {
        {"refine", "--task", "Cross the road", "--model", fx("models/crossroad.json"), "--spec", fx("specs/crossroad.json"),
         "--replay", fx("transcripts/crossroad.json"), "--auto", "--prune", "--out", (dir / "crossroad").string()},
        {"refine", "--task", "Cross the road at the traffic light", "--model", fx("models/crossroad_light.json"),
         "--spec", fx("specs/crossroad_light.json"), "--replay", fx("transcripts/crossroad_light.json"),
         "--instruction", "with an action \"approach pedestrian crossing\"", "--instruction",
         "to ensure the action \"cross the road\" is performed under conditions \"traffic light turns green\" and \"no "
         "cars are coming\"",
         "--out", (dir / "crossroad_light").string()},
        {"refine", "--task", "Reboot the modem and router", "--model", fx("models/wifi.json"), "--spec",
         fx("specs/wifi.json"), "--replay", fx("transcripts/wifi.json"), "--instruction",
         "include \"wait two minutes\" after \"plug in modem\"", "--instruction",
         "include \"wait two minutes\" after \"turn on router\"", "--out", (dir / "wifi").string()},
        {"steps", "Find a dentist and make an appointment", "--replay", fx("transcripts/dental.json"), "--out",
         (dir / "dental").string()},
    };
    for (const auto& args : runs) {
        std::ostringstream out, err;
        (void)run_cli(args, out, err);
    }
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const auto ext = e.path().extension();
        if (ext == ".json" || ext == ".dot")
            files[fs::relative(e.path(), dir).string()] = read_text_file(e.path().string());
    }
    // Layered builds straight from the library as well.
    for (const auto& name : expected_names()) {
        const auto c = built_for(name);
        files["library/" + name + ".json"] = serialize(c);
        files["library/" + name + ".dot"] = export_dot(c);
    }
    return files;
}

outcome determinism() {
    outcome o;
    const auto base = fs::temp_directory_path() / "taskfsa_acceptance_det";
    const auto a = pipeline_run(base / "a");
    const auto b = pipeline_run(base / "b");
    fs::remove_all(base);
    std::size_t controllers = 0, dots = 0;
    for (const auto& [name, text] : a) {
        const auto it = b.find(name);
        if (it == b.end() || it->second != text) o.fail(name + " differs");
        if (name.ends_with(".dot")) ++dots;
        if (name.ends_with("controller.json") || name.starts_with("library/")) ++controllers;
    }
    if (a.size() != b.size()) o.fail("different file sets");
    if (dots < 10) o.fail("only " + std::to_string(dots) + " DOT files produced");
    if (o.ok) o.detail = std::to_string(a.size()) + " files byte-identical (" + std::to_string(dots) + " DOT)";
    return o;
}

} // namespace

int main() {
    const std::vector<criterion> criteria = {
        {1, "grammar rows classify", 1.0, grammar_rows},
        {2, "controllers reproduce", 5.0, reproduction},
        {3, "verdicts and projections", 10.0, verdicts},
        {4, "refinement loops converge", 30.0, refinement_loops},
        {5, "check agrees with brute force", 120.0, checker_oracle},
        {6, "automata agree with lasso semantics", 120.0, translation_oracle},
        {7, "SMV exports validate", 60.0, smv_exports},
        {8, "pipeline is deterministic", 60.0, determinism},
    };
    bool all = true;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.limit_seconds) o.fail("took longer than the limit");
        all = all && o.ok;
        char timing[64];
        std::snprintf(timing, sizeof timing, "%.2f s of %.0f s", secs, c.limit_seconds);
        std::cout << (o.ok ? "PASS" : "FAIL") << "  " << c.number << ". " << c.title << ": " << o.detail << " ("
                  << timing << ")" << std::endl;
    }
    return all ? 0 : 1;
}
