#include "taskfsa/glm/step_tree.hpp"

#include "taskfsa/core/errors.hpp"

#include <algorithm>
#include <charconv>

namespace taskfsa {

namespace {

std::vector<unsigned long> components(std::string_view s) {
    std::vector<unsigned long> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto end = s.find('.', start);
        if (end == std::string_view::npos) end = s.size();
        unsigned long v = 0;
        std::from_chars(s.data() + start, s.data() + end, v);
        out.push_back(v);
        start = end + 1;
    }
    return out;
}

} // namespace

bool dotted_less(std::string_view a, std::string_view b) {
    if (a.empty() || b.empty()) return a.empty() && !b.empty();
    return components(a) < components(b);
}

std::string parent_number(std::string_view number) {
    const auto dot = number.rfind('.');
    return dot == std::string_view::npos ? std::string() : std::string(number.substr(0, dot));
}

std::size_t number_depth(std::string_view number) {
    return number.empty() ? 0 : static_cast<std::size_t>(std::count(number.begin(), number.end(), '.')) + 1;
}

std::string child_number(std::string_view parent, std::size_t index) {
    return parent.empty() ? std::to_string(index) : std::string(parent) + "." + std::to_string(index);
}

bool is_descendant(std::string_view number, std::string_view ancestor) {
    if (ancestor.empty()) return !number.empty();
    return number.size() > ancestor.size() && number.starts_with(ancestor) && number[ancestor.size()] == '.';
}

void step_tree::remove_children(std::string_view parent) {
    for (auto it = _nodes.begin(); it != _nodes.end();)
        it = is_descendant(it->first, parent) ? _nodes.erase(it) : std::next(it);
    for (auto it = _exchanges.begin(); it != _exchanges.end();)
        it = (is_descendant(it->first, parent) || it->first == parent) ? _exchanges.erase(it) : std::next(it);
}

void step_tree::set_children(std::string_view parent, const std::vector<std::string>& texts, std::string exchange) {
    if (!parent.empty() && !contains(parent)) throw precondition_error("no step " + std::string(parent));
    remove_children(parent);
    for (std::size_t i = 0; i < texts.size(); ++i) {
        auto number = child_number(parent, i + 1);
        _nodes.emplace(number, step_node{number, texts[i], number_depth(number)});
    }
    if (!exchange.empty()) _exchanges[std::string(parent)] = std::move(exchange);
}

const step_node& step_tree::at(std::string_view number) const {
    const auto it = _nodes.find(number);
    if (it == _nodes.end()) throw precondition_error("no step " + std::string(number));
    return it->second;
}

std::vector<std::string> step_tree::children(std::string_view parent) const {
    std::vector<std::string> out;
    for (const auto& [k, _] : _nodes)
        if (parent_number(k) == parent) out.push_back(k);
    return out;
}

std::vector<step_node> step_tree::nodes() const {
    std::vector<step_node> out;
    out.reserve(_nodes.size());
    for (const auto& [_, n] : _nodes) out.push_back(n);
    return out;
}

std::vector<std::string> step_tree::leaves() const { return leaves_under(""); }

std::vector<std::string> step_tree::leaves_under(std::string_view number) const {
    std::vector<std::string> out;
    for (const auto& [k, _] : _nodes) {
        if (!(k == number || is_descendant(k, number))) continue;
        if (!has_children(k)) out.push_back(k);
    }
    return out;
}

std::size_t step_tree::max_depth() const {
    std::size_t d = 0;
    for (const auto& [_, n] : _nodes) d = std::max(d, n.depth);
    return d;
}

std::vector<std::pair<std::string, std::string>> step_tree::sibling_steps(std::string_view parent) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& k : children(parent)) out.emplace_back(k, at(k).text);
    return out;
}

std::optional<std::string> step_tree::exchange(std::string_view parent) const {
    const auto it = _exchanges.find(parent);
    if (it == _exchanges.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> step_tree::check() const {
    std::vector<std::string> problems;
    for (const auto& [k, n] : _nodes) {
        const auto parent = parent_number(k);
        if (!parent.empty() && !contains(parent)) problems.push_back("step " + k + " has no parent " + parent);
        const auto siblings = children(parent);
        for (std::size_t i = 0; i < siblings.size(); ++i)
            if (siblings[i] != child_number(parent, i + 1)) {
                problems.push_back("steps under '" + parent + "' are not numbered contiguously from 1");
                break;
            }
        if (n.depth != number_depth(k)) problems.push_back("step " + k + " has wrong depth");
    }
    std::sort(problems.begin(), problems.end());
    problems.erase(std::unique(problems.begin(), problems.end()), problems.end());
    return problems;
}

} // namespace taskfsa
