#include "taskfsa/io/dot.hpp"

#include <sstream>

namespace taskfsa {

namespace {

std::string quoted(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

std::string list_text(const std::set<std::string>& items) {
    std::string out;
    for (const auto& i : items) {
        if (!out.empty()) out += ", ";
        out += i;
    }
    return out;
}

void header(std::ostringstream& out, std::string_view name) {
    out << "digraph " << name << " {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=circle];\n";
    out << "  __start [shape=point, label=\"\"];\n";
}

} // namespace

std::string export_dot(const controller& c) {
    std::ostringstream out;
    header(out, "controller");
    for (const auto& s : c.states) {
        out << "  " << quoted(s.id);
        if (s.id == c.absorbing) out << " [shape=doublecircle]";
        out << ";\n";
    }
    out << "  __start -> " << quoted(c.initial) << ";\n";
    for (const auto& t : c.transitions) {
        const auto label = "(" + to_display(t.cond) + ", " + action_text(t.out) + ")";
        out << "  " << quoted(t.from) << " -> " << quoted(t.to) << " [label=" << quoted(label) << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string export_dot(const model& m) {
    std::ostringstream out;
    header(out, "model");
    for (const auto& s : m.states) {
        const auto& labels = m.label_of(s);
        out << "  " << quoted(s) << " [label=" << quoted(labels.empty() ? s : s + "\n" + list_text(labels)) << "];\n";
    }
    out << "  __start -> " << quoted(m.initial) << ";\n";
    for (const auto& t : m.transitions) {
        out << "  " << quoted(t.from) << " -> " << quoted(t.to) << " [label=" << quoted(to_display(t.guard))
            << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace taskfsa
