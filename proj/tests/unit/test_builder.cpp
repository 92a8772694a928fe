#include "support.hpp"

#include "taskfsa/builder/build.hpp"
#include "taskfsa/core/isomorphism.hpp"
#include "taskfsa/glm/queries.hpp"

#include <doctest.h>

using namespace taskfsa;
using namespace taskfsa::testing;

namespace {

step_tree flat(const std::vector<std::string>& texts) {
    step_tree t("task");
    t.set_children("", texts);
    return t;
}

const std::vector<std::string> light_steps = {"Locate the traffic light.", "Wait for the traffic light to turn green.",
                                              "Look both ways before crossing the road.",
                                              "Cross the road if no cars are coming."};

step_tree crossroad_two_layers() {
    auto glm = replay_client("crossroad");
    return query_steps(glm, "Cross the road", 2);
}

controller rename(const controller& c, const std::map<std::string, std::string>& m) {
    return rewrite_labels(c, [&](const std::string& s) {
        const auto it = m.find(s);
        return it == m.end() ? s : it->second;
    });
}

// Conditions leaving each non-absorbing state cover every valuation.
void check_total(const controller& c) {
    for (const auto& s : c.states) {
        if (s.id == c.absorbing) continue;
        std::vector<formula> conds;
        for (const auto* t : c.outgoing(s.id)) conds.push_back(t->cond);
        INFO("state " << s.id);
        REQUIRE_FALSE(conds.empty());
        CHECK(valid(formula::disjunction(conds)));
    }
}

// Every controller edge is the disjunction of the emitted edges with the same endpoints and output.
void check_trace(const build_result& r) {
    const auto& c = r.ctrl;
    for (const auto& t : c.transitions) {
        if (t.from == c.absorbing) continue;
        std::vector<formula> parts;
        for (const auto& rec : r.trace) {
            for (const auto& e : rec.emitted) {
                if (e.from == t.from && e.to == t.to && e.out == t.out) parts.push_back(e.cond);
            }
        }
        INFO(t.from << " -> " << t.to);
        CHECK(equivalent(formula::disjunction(parts), t.cond));
    }
    for (const auto& rec : r.trace) {
        for (const auto& e : rec.emitted) {
            const bool housed = std::any_of(c.transitions.begin(), c.transitions.end(), [&](const transition& t) {
                return t.from == e.from && t.to == e.to && t.out == e.out;
            });
            CHECK((housed || !satisfiable(e.cond)));
        }
    }
}

} // namespace

TEST_CASE("single default step") {
    const auto r = build_top_level(flat({"Dial the number."}));
    CHECK(r.ctrl.states.size() == 2);
    REQUIRE(r.ctrl.transitions.size() == 2);
    const auto& t = r.ctrl.transitions[0];
    CHECK(t.cond.is_true());
    CHECK(t.out == action_set{"dial number"});
    CHECK(t.to == r.ctrl.absorbing);
    CHECK(r.trace.size() == 1);
    CHECK(validate_controller(r.ctrl).empty());
}

TEST_CASE("traffic-light branch") {
    const auto r = build_top_level(flat(light_steps));
    CHECK(validate_controller(r.ctrl).empty());
    CHECK_FALSE(mismatch(rename(r.ctrl, {{"turn green", "green"}}), "crossroad_light_initial"));
    CHECK(r.ctrl.initial == "q1");
    check_total(r.ctrl);
    check_trace(r);
}

TEST_CASE("second layer of the crossing task") {
    const auto tree = crossroad_two_layers();
    REQUIRE(tree.leaves().size() == 9);
    const auto r = build_steps(tree, tree.leaves());
    CHECK(r.ctrl.states.size() == 10);
    CHECK(r.trace.size() == 9);
    CHECK_FALSE(mismatch(rename(r.ctrl, {{"walk road", "cross road"}}), "crossroad_substeps"));
    check_total(r.ctrl);
    check_trace(r);
    CHECK(build_steps(tree, tree.leaves()).ctrl == r.ctrl);
}

TEST_CASE("state count is steps plus one without wait merges") {
    for (const auto& steps : std::vector<std::vector<std::string>>{
             {"Dial the number."},
             {"Look both ways before crossing the road.", "Cross the road."},
             {"Research local dental clinics", "Read patient reviews", "Compare services and prices",
              "Schedule an appointment"}}) {
        CHECK(build_top_level(flat(steps)).ctrl.states.size() == steps.size() + 1);
    }
    // An if/else pair shares one state, as does a wait with no action of its own and the next step.
    CHECK(build_top_level(flat({"Look both ways before crossing the road.",
                                "If there are no cars coming, proceed to cross the road.",
                                "If there are cars coming, wait for them to pass before crossing the road."}))
              .ctrl.states.size() == 3);
    CHECK(build_top_level(flat(light_steps)).ctrl.states.size() == light_steps.size());
}

TEST_CASE("apply_rule per grammar row") {
    const state_resolver resolve = [](std::string_view n) { return state_for_step(n); };

    const auto until = apply_rule(parse_step("1", "Stay until the car passes."), "q1", "q2", resolve);
    REQUIRE(until.size() == 2);
    const auto loop = std::find_if(until.begin(), until.end(), [](const transition& t) { return t.to == "q1"; });
    const auto exit = std::find_if(until.begin(), until.end(), [](const transition& t) { return t.to == "q2"; });
    REQUIRE(loop != until.end());
    REQUIRE(exit != until.end());
    CHECK(equivalent(loop->cond, parse_formula("!car_pass")));
    CHECK(loop->out == action_set{"stay"});
    CHECK(exit->cond == formula::atom("car pass"));
    CHECK(exit->out.empty());

    const auto dflt = apply_rule(parse_step("1", "Dial the number."), "q1", "q2", resolve);
    REQUIRE(dflt.size() == 1);
    CHECK(dflt[0].to == "q2");

    const auto direct = apply_rule(parse_step("2", "Proceed to [1]."), "q2", "q3", resolve);
    REQUIRE(direct.size() == 1);
    CHECK(direct[0].to == "q1");
    CHECK(direct[0].out.empty());

    const auto cond = apply_rule(parse_step("3", "If there are no cars, cross the road."), "q3", "abs", resolve);
    REQUIRE(cond.size() == 2);
    for (const auto& t : cond) {
        if (t.to == "abs") {
            CHECK(equivalent(t.cond, parse_formula("!car")));
            CHECK(t.out == action_set{"cross road"});
        } else {
            CHECK(t.to == "q3");
            CHECK(equivalent(t.cond, parse_formula("car")));
        }
    }

    const auto wait = apply_rule(parse_step("1", "Wait for the car to pass, then cross the road."), "q1", "q2", resolve);
    REQUIRE(wait.size() == 2);
    for (const auto& t : wait) {
        if (t.to == "q2") {
            CHECK(t.cond == formula::atom("pass"));
            CHECK(t.out == action_set{"cross road"});
        } else {
            CHECK(equivalent(t.cond, parse_formula("!pass")));
            CHECK(t.out.empty());
        }
    }
}

TEST_CASE("if/else pair shares one state") {
    const auto r = build_top_level(flat({"If there are no cars, cross the road.", "If there are cars, stay."}));
    const auto& c = r.ctrl;
    const auto out = c.outgoing("q1");
    REQUIRE(out.size() == 2);
    for (const auto* t : out) {
        if (t->out == action_set{"cross road"}) {
            CHECK(equivalent(t->cond, parse_formula("!car")));
        } else {
            CHECK(t->out == action_set{"stay"});
            CHECK(equivalent(t->cond, parse_formula("car")));
        }
        CHECK(t->to != "q1");
    }
    check_total(c);
}

TEST_CASE("last conditional step exits into the absorbing state") {
    const auto c = build_top_level(flat({"Dial the number.", "If the line is free, speak."})).ctrl;
    bool found = false;
    for (const auto* t : c.outgoing("q2")) {
        if (!t->out.empty()) {
            CHECK(t->to == c.absorbing);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("dangling references") {
    CHECK_THROWS_AS((void)build_top_level(flat({"Dial the number.", "Proceed to [7]."})), dangling_step_ref);
    // One past the last step means done.
    const auto c = build_top_level(flat({"Dial the number.", "Proceed to [3]."})).ctrl;
    CHECK(c.outgoing("q2").front()->to == c.absorbing);
}

TEST_CASE("splicing") {
    auto tree = flat({"Dial the number.", "Speak."});
    tree.set_children("1", {"Pick up the phone."});
    const auto parent = build_top_level(tree).ctrl;
    const auto child = build_steps(tree, tree.children("1")).ctrl;
    const auto s = splice_substeps(parent, "q1", child);
    CHECK(validate_controller(s).empty());
    CHECK(s.states.size() == parent.states.size() + 1);
    const auto first = s.outgoing("q1");
    REQUIRE(first.size() == 1);
    CHECK(first[0]->out.empty());
    CHECK(first[0]->cond.is_true());
    const auto inner = s.outgoing(first[0]->to);
    REQUIRE(inner.size() == 1);
    CHECK(inner[0]->out == action_set{"pick phone"});
    CHECK(inner[0]->to == "q2");
    CHECK(s.actions.contains("pick phone"));

    const auto branching = build_top_level(flat({"If there are no cars, cross the road.", "Dial the number."})).ctrl;
    const auto both = build_top_level(flat({"If there are no cars, go to [2]. If there are cars, go to [3].",
                                            "Dial the number.", "Speak."}))
                          .ctrl;
    CHECK_THROWS_AS((void)splice_substeps(both, "q1", child), ambiguous_splice);
    CHECK_NOTHROW((void)splice_substeps(branching, "q2", child));
}

TEST_CASE("layered builds") {
    auto glm = replay_client("dental");
    auto tree = query_steps(glm, "Find a dentist and make an appointment", 1);
    query_substeps(glm, tree, "1");
    query_substeps(glm, tree, "1.3");
    const auto c = build_layered(tree);
    CHECK(c.states.size() == 11);
    CHECK(validate_controller(c).empty());
    CHECK_FALSE(mismatch(c, "dental_layered"));

    // Same result from explicit splices.
    const auto top = build_top_level(tree).ctrl;
    auto level2 = build_steps(tree, tree.children("1")).ctrl;
    level2 = splice_substeps(level2, "q1.3", build_steps(tree, tree.children("1.3")).ctrl);
    const auto manual = splice_substeps(top, "q1", level2);
    CHECK(find_isomorphism(manual, c));

    auto mpc_glm = replay_client("mpc");
    auto mpc = query_steps(mpc_glm, "Secure multi-party computation", 1);
    query_substeps(mpc_glm, mpc, "2");
    query_substeps(mpc_glm, mpc, "3");
    const auto m = build_layered(mpc);
    CHECK(m.states.size() == 13);
    CHECK_FALSE(mismatch(m, "mpc_layered"));
}

TEST_CASE("merging two scenarios") {
    const auto no_light = build_top_level(flat({"Look both ways before crossing the road.",
                                                "If there are no cars coming, proceed to cross the road.",
                                                "If there are cars coming, wait for them to pass before crossing the road."}))
                              .ctrl;
    const auto light = build_top_level(flat(light_steps)).ctrl;
    const auto merged = merge_branches(no_light, light, "traffic light");
    CHECK(merged.initial == "q0");
    CHECK(merged.states.size() == 7);
    CHECK(validate_controller(merged).empty());
    CHECK_FALSE(mismatch(rename(merged, {{"turn green", "green"}}), "crossroad_merged"));
}

TEST_CASE("builder output validates on every fixture tree") {
    for (const auto& name : expected_names()) {
        INFO(name);
        const auto c = built_for(name);
        CHECK(validate_controller(c).empty());
        check_total(c);
    }
}
