#include "support.hpp"

#include "taskfsa/cli/cli.hpp"
#include "taskfsa/verify/smv.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace taskfsa;
using namespace taskfsa::testing;
namespace fs = std::filesystem;

namespace {

struct result {
    int code;
    std::string out;
    std::string err;
};

result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

struct scratch_dir {
    fs::path path;
    explicit scratch_dir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~scratch_dir() { fs::remove_all(path); }
    [[nodiscard]] std::string operator/(const std::string& leaf) const { return (path / leaf).string(); }
};

std::string fx(const std::string& relative) { return fixture_path(relative); }

} // namespace

TEST_CASE("steps and build") {
    scratch_dir dir("taskfsa_cli_steps");
    const auto r = run({"steps", "Cross the road", "--replay", fx("transcripts/crossroad.json"), "--out", dir / "s"});
    REQUIRE(r.code == exit_pass);
    CHECK(r.out.find("[1] Look both ways before crossing the road.") != std::string::npos);
    const auto tree = parse_steps_document(read_text_file(dir / "s/steps.json"));
    CHECK(tree.children("").size() == 3);
    CHECK(parse_transcript_document(read_text_file(dir / "s/transcript.json")).entries.size() == 1);

    // Without --out the document goes to stdout.
    const auto doc = run({"steps", "Cross the road", "--replay", fx("transcripts/crossroad.json")});
    CHECK(parse_steps_document(doc.out) == tree);

    const auto b = run({"build", dir / "s/steps.json", "--out", dir / "b"});
    REQUIRE(b.code == exit_pass);
    const auto c = parse_controller_document(read_text_file(dir / "b/controller.json"));
    CHECK(c.states.size() == 3);
    CHECK(dot_problems(read_text_file(dir / "b/controller.dot")).empty());

    const auto deep = run({"steps", "Find a dentist and make an appointment", "--replay", fx("transcripts/dental.json"),
                           "--depth", "2", "--out", dir / "d"});
    CHECK(deep.code == exit_backend);   // the dental transcript expands only two steps
}

TEST_CASE("verify exit codes and outputs") {
    scratch_dir dir("taskfsa_cli_verify");
    write_text_file(dir / "initial.json", serialize(built_for("crossroad_light_initial")));
    write_text_file(dir / "final.json", serialize(crossroad_light_history()[2].ctrl()));

    const auto fail = run({"verify", "--controller", dir / "initial.json", "--model", fx("models/crossroad_light.json"),
                           "--spec", fx("specs/crossroad_light.json"), "--out", dir / "v"});
    CHECK(fail.code == exit_fail);
    CHECK(fail.out.rfind("FAIL traffic_light & G F (green & !car_come) -> F goal\nprojection: loop(p0)\n", 0) == 0);
    const auto doc = parse_verdict_document(read_text_file(dir / "v/verdict-1.json"));
    CHECK_FALSE(doc.result.pass);

    const auto pass = run({"verify", "--controller", dir / "final.json", "--model", fx("models/crossroad_light.json"),
                           "--spec", "traffic_light & G F (green & !car_come) -> F goal", "--spec", "G !stuck",
                           "--smv", dir / "final.smv"});
    CHECK(pass.code == exit_pass);
    const auto report = validate_smv(read_text_file(dir / "final.smv"));
    CHECK(report.ok);
    CHECK(report.specs == 2);

    CHECK(run({"verify", "--controller", dir / "final.json", "--model", fx("models/crossroad_light.json")}).code ==
          exit_usage);
    CHECK(run({"verify", "--controller", dir / "missing.json", "--model", fx("models/crossroad_light.json"), "--spec",
               "F goal"})
              .code == exit_usage);
}

TEST_CASE("refine runs the loop and writes the session") {
    scratch_dir dir("taskfsa_cli_refine");
    const auto r = run({"refine", "--task", "Cross the road", "--model", fx("models/crossroad.json"), "--spec",
                        fx("specs/crossroad.json"), "--replay", fx("transcripts/crossroad.json"), "--auto", "--prune",
                        "--out", dir / "r"});
    REQUIRE(r.code == exit_pass);
    CHECK(r.out.find("iteration 0 (initial): 3 states") != std::string::npos);
    CHECK(r.out.find("iteration 1 (auto): 10 states") != std::string::npos);
    CHECK(r.out.find("iteration 2 (prune): 5 states") != std::string::npos);
    CHECK(r.out.find("status: pass") != std::string::npos);
    const auto s = parse_session_document(read_text_file(dir / "r/session.json"));
    CHECK_FALSE(mismatch(s.ctrl(), "crossroad_pruned"));
    CHECK(parse_controller_document(read_text_file(dir / "r/controller.json")) == s.ctrl());
    CHECK(dot_problems(read_text_file(dir / "r/model.dot")).empty());

    // Resuming a stored session with a transcript named by fixture stem.
    const auto light = run({"refine", "--task", "Cross the road at the traffic light", "--model",
                            fx("models/crossroad_light.json"), "--spec", fx("specs/crossroad_light.json"), "--replay",
                            fx("crossroad_light"), "--out", dir / "l"});
    CHECK(light.code == exit_fail);
    const auto resumed = run({"refine", "--session", dir / "l/session.json", "--replay", fx("crossroad_light"),
                              "--instruction", "with an action \"approach pedestrian crossing\"", "--out", dir / "l"});
    CHECK(resumed.code == exit_fail);
    CHECK(resumed.out.find("p0 → p1 → p3 → loop(p5)") != std::string::npos);
    CHECK(parse_session_document(read_text_file(dir / "l/session.json")).history.size() == 2);
}

TEST_CASE("usage and backend errors") {
    CHECK(run({}).code == exit_usage);
    CHECK(run({"--help"}).code == exit_pass);
    CHECK(run({"fly"}).code == exit_usage);
    CHECK(run({"steps", "", "--replay", fx("transcripts/crossroad.json")}).code == exit_usage);
    CHECK(run({"steps", "Cross the road", "--replay", fx("transcripts/crossroad.json"), "--depth", "0"}).code ==
          exit_usage);
    CHECK(run({"steps", "Cross the road", "--bogus"}).code == exit_usage);

    const auto miss = run({"steps", "Juggle", "--replay", fx("transcripts/crossroad.json")});
    CHECK(miss.code == exit_backend);
    CHECK(miss.err.rfind("backend error: ", 0) == 0);
}

TEST_CASE("transcript path resolution") {
    CHECK(resolve_transcript_path(fx("transcripts/wifi.json")) == fx("transcripts/wifi.json"));
    CHECK(resolve_transcript_path(fx("transcripts/wifi")) == fx("transcripts/wifi.json"));
    CHECK(resolve_transcript_path(fx("wifi")) == fx("transcripts/wifi.json"));
}
