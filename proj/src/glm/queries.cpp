#include "taskfsa/glm/queries.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace taskfsa {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

// Exchanges of the top level and of every ancestor of number, outermost first.
std::string history_for(const step_tree& tree, std::string_view number) {
    std::vector<std::string> keys;
    for (auto k = parent_number(number); !k.empty(); k = parent_number(k)) keys.push_back(k);
    keys.push_back("");
    std::string out;
    for (auto it = keys.rbegin(); it != keys.rend(); ++it)
        if (auto ex = tree.exchange(*it)) out += *ex + "\n\n";
    return out;
}

} // namespace

std::string steps_prompt(std::string_view task) {
    if (trim(task).empty()) throw precondition_error("task description is empty");
    return "Steps for: " + trim(task) + "\n[1]";
}

std::string substeps_prompt(const step_tree& tree, std::string_view number) {
    const auto& node = tree.at(number);
    return history_for(tree, number) + "Substeps for: [" + node.number + "] " + node.text + "\n[" +
           child_number(number, 1) + "]";
}

std::string synonym_prompt(std::string_view a, std::string_view b) {
    return "Do the two phrases \"" + std::string(a) + "\" and \"" + std::string(b) + "\" lead to the same effect?";
}

prompt build_refinement_prompt(const std::vector<std::pair<std::string, std::string>>& steps,
                               std::string_view instruction) {
    auto instr = trim(instruction);
    if (instr.empty()) throw precondition_error("refinement instruction is empty");
    while (!instr.empty() && instr.back() == ':') instr.pop_back();
    const auto low = lower(instr);
    std::string header;
    if (low.starts_with("refine ") || low.starts_with("revise "))
        header = instr + ":";
    else if (low.starts_with("with ") || low.starts_with("to "))
        header = "Refine the following steps " + instr + ":";
    else
        header = "Revise the following steps to " + instr + ":";
    std::string text = header + "\n";
    for (const auto& [number, step] : steps) text += "[" + number + "] " + step + "\n";
    text += "[1]";
    return prompt{text};
}

std::vector<std::string> split_completion(std::string_view completion, std::string_view first_number) {
    const std::string text(completion);
    static const std::regex marker(R"((^|\n)[ \t]*(?:\[(\d+(?:\.\d+)*)\]|(\d+(?:\.\d+)*)[.)](?=[ \t])))");
    const auto parent = parent_number(first_number);
    const auto first_index = static_cast<std::size_t>(std::stoul(
        std::string(first_number.substr(first_number.rfind('.') == std::string_view::npos ? 0 : first_number.rfind('.') + 1))));

    struct cut {
        std::size_t begin;   // marker start
        std::size_t body;    // first character after the marker
    };
    std::vector<cut> cuts;
    std::size_t expected = first_index;
    // The prompt ends with the first marker, so text before any marker is step one.
    const auto lead = text.find_first_not_of(" \t\r\n");
    bool implicit_first = true;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), marker); it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        const std::string num = m[2].matched ? m[2].str() : m[3].str();
        const auto begin = static_cast<std::size_t>(m.position(0)) + m[1].length();
        const auto body = static_cast<std::size_t>(m.position(0) + m.length(0));
        const bool at_start = lead != std::string::npos && text.find_first_not_of(" \t\r\n", begin) == lead;
        if (cuts.empty() && implicit_first && at_start && (num == first_number || num == std::to_string(first_index))) {
            implicit_first = false;
            cuts.push_back({begin, body});
            ++expected;
            continue;
        }
        if (cuts.empty() && implicit_first) {
            cuts.push_back({0, 0});
            implicit_first = false;
            ++expected;
        }
        if (num == child_number(parent, expected) || num == std::to_string(expected)) {
            cuts.push_back({begin, body});
            ++expected;
        }
    }
    if (cuts.empty()) cuts.push_back({0, 0});

    std::vector<std::string> out;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        const auto end = i + 1 < cuts.size() ? cuts[i + 1].begin : text.size();
        auto piece = normalize_whitespace(std::string_view(text).substr(cuts[i].body, end - cuts[i].body));
        if (piece.empty()) continue;
        out.push_back(std::move(piece));
    }
    if (out.empty()) throw malformed_completion(text);
    return out;
}

step_tree query_steps(glm_client& glm, std::string_view task, std::size_t depth, const glm_params& params) {
    if (depth < 1) throw precondition_error("depth must be at least 1");
    step_tree tree{trim(task)};
    const auto text = steps_prompt(task);
    const auto completion = glm.complete({text, params});
    tree.set_children("", split_completion(completion, "1"), text + completion);
    for (std::size_t level = 2; level <= depth; ++level)
        for (const auto& leaf : tree.leaves())
            if (number_depth(leaf) == level - 1) query_substeps(glm, tree, leaf, params);
    return tree;
}

void query_substeps(glm_client& glm, step_tree& tree, std::string_view number, const glm_params& params) {
    if (!tree.contains(number)) throw precondition_error("no step " + std::string(number) + " to expand");
    const auto text = substeps_prompt(tree, number);
    const auto completion = glm.complete({text, params});
    tree.set_children(number, split_completion(completion, child_number(number, 1)), text + completion);
}

synonym_verdict query_synonym(glm_client& glm, std::string_view a, std::string_view b, const glm_params& params) {
    const auto na = normalize_whitespace(lower(a));
    const auto nb = normalize_whitespace(lower(b));
    if (na.empty() || nb.empty()) throw precondition_error("synonym query needs two non-empty phrases");
    if (na == nb) return {true, "identical phrases", false};
    const auto completion = glm.complete({synonym_prompt(a, b), params});
    auto answer = trim(completion);
    const auto low = lower(answer);
    auto rationale = [&](std::size_t skip) {
        auto rest = answer.substr(skip);
        const auto b2 = rest.find_first_not_of(" .,;:!-");
        return b2 == std::string::npos ? std::string() : trim(rest.substr(b2));
    };
    if (low.starts_with("yes")) return {true, rationale(3), true};
    if (low.starts_with("no")) return {false, rationale(2), true};
    throw unparseable_verdict("completion starts with neither Yes nor No: " + answer.substr(0, 80));
}

std::vector<std::string> query_refinement(glm_client& glm, const std::vector<std::pair<std::string, std::string>>& steps,
                                          std::string_view instruction, const glm_params& params) {
    auto p = build_refinement_prompt(steps, instruction);
    p.params = params;
    return split_completion(glm.complete(p), "1");
}

} // namespace taskfsa
