// Regenerates fixtures/transcripts by driving the pipeline against a table of
// known completions. Prompts come from the library, so the transcripts always
// match the current prompt templates. Usage: record_fixtures <fixtures dir>

#include "taskfsa/builder/build.hpp"
#include "taskfsa/glm/queries.hpp"
#include "taskfsa/io/documents.hpp"
#include "taskfsa/refine/session.hpp"

#include <iostream>
#include <map>

using namespace taskfsa;

namespace {

struct answer {
    std::string completion;
    std::string source;   // "reference" or "authored"
};

// Keyed by the last block of the prompt (history blocks are separated by a blank line).
const std::map<std::string, answer>& table() {
    static const std::map<std::string, answer> t = {
        {"Steps for: Cross the road\n[1]",
         {" Look both ways before crossing the road.\n[2] If there are no cars coming, proceed to cross the road.\n"
          "[3] If there are cars coming, wait for them to pass before crossing the road.",
          "reference"}},
        {"Substeps for: [1] Look both ways before crossing the road.\n[1.1]",
         {" Face the direction you want to cross the road in.\n[1.2] Look to the left.\n[1.3] Look to the right.\n"
          "[1.4] If there are no cars coming, go to [2]. If there are cars coming, go to [3].",
          "reference"}},
        {"Substeps for: [2] If there are no cars coming, proceed to cross the road.\n[2.1]",
         {" Walk across the road.\n[2.2] Once you have reached the other side, look both ways again to make sure no "
          "cars are coming.\n[2.3] If there are no cars coming, proceed to [4]. If there are cars coming, back to [1].",
          "reference"}},
        {"Substeps for: [3] If there are cars coming, wait for them to pass before crossing the road.\n[3.1]",
         {" Wait for the cars to pass.\n[3.2] Once the cars have passed, back to [2].", "reference"}},
        {"Do the two phrases \"walk road\" and \"cross road\" lead to the same effect?",
         {" Yes. Both phrases lead to ...", "reference"}},

        {"Steps for: Cross the road at the traffic light\n[1]",
         {" Locate the traffic light.\n[2] Wait for the traffic light to turn green.\n"
          "[3] Look both ways before crossing the road.\n[4] Cross the road if no cars are coming.",
          "reference"}},
        {"Do the two phrases \"turn green\" and \"green\" lead to the same effect?",
         {" Yes. Both phrases describe the traffic light showing green.", "authored"}},
        {"Refine the following steps with an action \"approach pedestrian crossing\":\n[1] Locate the traffic light.\n"
         "[2] Wait for the traffic light to turn green.\n[3] Look both ways before crossing the road.\n"
         "[4] Cross the road if no cars are coming.\n[1]",
         {"\n[1] Approach the pedestrian crossing.\n[2] Wait for the traffic light to turn green.\n"
          "[3] Look both ways before crossing the road.\n[4] Cross the road if no cars are coming.",
          "reference"}},
        {"Refine the following steps to ensure the action \"cross the road\" is performed under conditions \"traffic "
         "light turns green\" and \"no cars are coming\":\n[1] Approach the pedestrian crossing.\n"
         "[2] Wait for the traffic light to turn green.\n[3] Look both ways before crossing the road.\n"
         "[4] Cross the road if no cars are coming.\n[1]",
         {"\n[1] Approach the pedestrian crossing.\n[2] Wait for the traffic light to turn green.\n"
          "[3] Look both ways before crossing the road.\n"
          "[4] Cross the road if no cars are coming and the traffic light is green.",
          "reference"}},

        {"Steps for: Reboot the modem and router\n[1]",
         {" Unplug the modem's power cord\n[2] Disconnect the router's power source\n"
          "[3] Reconnect the modem's power cord\n[4] Observe the modem's indicator lights\n"
          "[5] Reconnect the router's power source\n[6] Monitor the router's indicator lights\n"
          "[7] Confirm internet connectivity on devices",
          "reference"}},
        {"Do the two phrases \"unplug modem power\" and \"unplug modem\" lead to the same effect?",
         {" Yes, both phrases lead to cutting power to the modem.", "reference"}},
        {"Do the two phrases \"disconnect router power\" and \"turn off router\" lead to the same effect?",
         {" Yes, both phrases lead to cutting power to the router.", "reference"}},
        {"Do the two phrases \"reconnect modem power\" and \"plug in modem\" lead to the same effect?",
         {" Yes, both phrases lead to restoring power to the modem.", "reference"}},
        {"Do the two phrases \"reconnect router power\" and \"turn on router\" lead to the same effect?",
         {" Yes, both phrases lead to restoring power to the router.", "reference"}},
        {"Revise the following steps to include \"wait two minutes\" after \"plug in modem\":\n"
         "[1] Unplug the modem's power cord\n[2] Disconnect the router's power source\n"
         "[3] Reconnect the modem's power cord\n[4] Observe the modem's indicator lights\n"
         "[5] Reconnect the router's power source\n[6] Monitor the router's indicator lights\n"
         "[7] Confirm internet connectivity on devices\n[1]",
         {" Unplug the modem's power cord\n[2] Disconnect the router's power source\n"
          "[3] Reconnect the modem's power cord\n[4] Wait two minutes\n[5] Observe the modem's indicator lights\n"
          "[6] Reconnect the router's power source\n[7] Monitor the router's indicator lights\n"
          "[8] Confirm internet connectivity on devices",
          "reference"}},
        {"Revise the following steps to include \"wait two minutes\" after \"turn on router\":\n"
         "[1] Unplug the modem's power cord\n[2] Disconnect the router's power source\n"
         "[3] Reconnect the modem's power cord\n[4] Wait two minutes\n[5] Observe the modem's indicator lights\n"
         "[6] Reconnect the router's power source\n[7] Monitor the router's indicator lights\n"
         "[8] Confirm internet connectivity on devices\n[1]",
         {" Unplug the modem's power cord\n[2] Disconnect the router's power source\n"
          "[3] Reconnect the modem's power cord\n[4] Wait two minutes\n[5] Observe the modem's indicator lights\n"
          "[6] Reconnect the router's power source\n[7] Wait two minutes\n[8] Monitor the router's indicator lights\n"
          "[9] Confirm internet connectivity on devices",
          "reference"}},

        {"Steps for: Find a dentist and make an appointment\n[1]",
         {" Research local dental clinics\n[2] Read patient reviews\n[3] Compare services and prices\n"
          "[4] Schedule an appointment",
          "reference"}},
        {"Substeps for: [1] Research local dental clinics\n[1.1]",
         {" Online search for local dental clinics\n[1.2] Gather recommendations from acquaintances\n"
          "[1.3] Check insurance provider's in-network list",
          "reference"}},
        {"Substeps for: [1.3] Check insurance provider's in-network list\n[1.3.1]",
         {" Get insurance provider's contact information\n[1.3.2] Call the insurance provider's customer service\n"
          "[1.3.3] Request a list of in-network dental clinics ",
          "reference"}},

        {"Steps for: Secure multi-party computation\n[1]",
         {" Define problem and inputs.\n[2] Secret sharing of inputs.\n[3] Compute secret shares.\n"
          "[4] Reconstruct the final result.\n[5] Output verification.\n[6] Decrypt the final result.\n",
          "reference"}},
        {"Substeps for: [2] Secret sharing of inputs.\n[2.1]",
         {" Generate random secret shares.\n[2.2] Securely store secret shares.\n", "reference"}},
        {"Substeps for: [3] Compute secret shares.\n[3.1]",
         {" Encrypt secret share.\n[3.2] Distribute encrypted shares.\n[3.3] Compute ciphertext.\n[3.4] Broadcast result.",
          "reference"}},
    };
    return t;
}

std::string last_block(const std::string& prompt) {
    const auto cut = prompt.rfind("\n\n");
    return cut == std::string::npos ? prompt : prompt.substr(cut + 2);
}

std::shared_ptr<glm_backend> table_backend() {
    return std::make_shared<scripted_backend>(
        [](const prompt& p) {
            const auto it = table().find(last_block(p.text));
            if (it == table().end()) throw backend_unavailable("no recorded completion for prompt:\n" + p.text);
            return it->second.completion;
        },
        "fixture-table");
}

void save(const glm_client& glm, const std::string& path) {
    auto t = glm.log();
    for (auto& e : t.entries) {
        e.timestamp = "2023-02-01T00:00:00Z";
        e.source = table().at(last_block(e.prompt)).source;
    }
    write_text_file(path, t.to_json_text());
    std::cout << path << ": " << t.entries.size() << " entries\n";
}

model load_model(const std::string& dir, const std::string& name) {
    return parse_model_document(read_text_file(dir + "/models/" + name + ".json"));
}

std::string load_spec(const std::string& dir, const std::string& name) {
    return parse_spec_document(read_text_file(dir + "/specs/" + name + ".json")).ltl;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: record_fixtures <fixtures dir>\n";
        return 2;
    }
    const std::string dir = argv[1];
    const std::string out = dir + "/transcripts/";
    try {
        {
            glm_client glm(table_backend());
            auto s = start_session("Cross the road", load_model(dir, "crossroad"), {load_spec(dir, "crossroad")}, glm);
            s = auto_refine(s, glm);
            s = prune(s, glm);
            save(glm, out + "crossroad.json");
        }
        {
            glm_client glm(table_backend());
            auto s = start_session("Cross the road at the traffic light", load_model(dir, "crossroad_light"),
                                   {load_spec(dir, "crossroad_light")}, glm);
            s = manual_refine(s, "with an action \"approach pedestrian crossing\"", glm);
            s = manual_refine(s,
                              "to ensure the action \"cross the road\" is performed under conditions \"traffic light "
                              "turns green\" and \"no cars are coming\"",
                              glm);
            save(glm, out + "crossroad_light.json");
        }
        {
            glm_client glm(table_backend());
            auto s = start_session("Reboot the modem and router", load_model(dir, "wifi"), {load_spec(dir, "wifi")}, glm);
            s = manual_refine(s, "include \"wait two minutes\" after \"plug in modem\"", glm);
            s = manual_refine(s, "include \"wait two minutes\" after \"turn on router\"", glm);
            save(glm, out + "wifi.json");
        }
        {
            glm_client glm(table_backend());
            auto tree = query_steps(glm, "Find a dentist and make an appointment", 1);
            query_substeps(glm, tree, "1");
            query_substeps(glm, tree, "1.3");
            save(glm, out + "dental.json");
        }
        {
            glm_client glm(table_backend());
            auto tree = query_steps(glm, "Secure multi-party computation", 1);
            query_substeps(glm, tree, "2");
            query_substeps(glm, tree, "3");
            save(glm, out + "mpc.json");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
