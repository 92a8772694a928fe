#include "taskfsa/refine/render.hpp"

#include <algorithm>
#include <sstream>

namespace taskfsa {

namespace {

std::string inputs_text(const std::set<std::string>& label, const controller& c) {
    std::string out;
    for (const auto& p : c.props) {
        if (!out.empty()) out += ", ";
        out += label.count(p) ? p : "¬ " + p;
    }
    return out.empty() ? "-" : out;
}

std::string label_text(const std::set<std::string>& label) {
    std::string out;
    for (const auto& l : label) {
        if (!out.empty()) out += ", ";
        out += l;
    }
    return out.empty() ? "{}" : "{" + out + "}";
}

} // namespace

std::string render_counterexample(const counterexample& cex, const controller& c) {
    struct row {
        std::string mark, model, ctrl, inputs, action, label;
    };
    std::vector<row> rows;
    rows.push_back({"", "model", "controller", "inputs", "action", "label"});
    auto add = [&](const trace_step& s, const char* mark) {
        rows.push_back({mark, s.model_state, s.controller_state, inputs_text(s.label, c), action_text(s.action),
                        label_text(s.label)});
    };
    for (const auto& s : cex.stem) add(s, " ");
    for (const auto& s : cex.loop) add(s, "*");

    // Column widths count code points so "¬" lines up.
    auto width = [](const std::string& s) {
        return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char ch) {
            return (static_cast<unsigned char>(ch) & 0xC0) != 0x80;
        }));
    };
    std::size_t w[5] = {0, 0, 0, 0, 0};
    for (const auto& r : rows) {
        w[0] = std::max(w[0], width(r.model));
        w[1] = std::max(w[1], width(r.ctrl));
        w[2] = std::max(w[2], width(r.inputs));
        w[3] = std::max(w[3], width(r.action));
    }
    std::ostringstream out;
    out << "projection: " << cex.projection_text() << '\n';
    auto cell = [&](const std::string& s, std::size_t n) { return s + std::string(n - width(s) + 2, ' '); };
    for (const auto& r : rows) {
        out << (r.mark.empty() ? " " : r.mark) << ' ' << cell(r.model, w[0]) << cell(r.ctrl, w[1])
            << cell(r.inputs, w[2]) << cell(r.action, w[3]) << r.label << '\n';
    }
    return out.str();
}

} // namespace taskfsa
