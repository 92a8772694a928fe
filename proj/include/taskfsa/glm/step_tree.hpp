#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace taskfsa {

struct step_node {
    std::string number;
    std::string text;
    std::size_t depth;

    friend bool operator==(const step_node&, const step_node&) = default;
};

// Dotted numbers compare component-wise: 1 < 1.2 < 1.10 < 2.
[[nodiscard]] bool dotted_less(std::string_view a, std::string_view b);
[[nodiscard]] std::string parent_number(std::string_view number);   // "" for top level
[[nodiscard]] std::size_t number_depth(std::string_view number);
[[nodiscard]] std::string child_number(std::string_view parent, std::size_t index);   // index from 1
[[nodiscard]] bool is_descendant(std::string_view number, std::string_view ancestor);

struct dotted_order {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const { return dotted_less(a, b); }
};

// Hierarchical step descriptions keyed by dotted number. Each expanded node
// also keeps the prompt/completion exchange that produced its children, so
// later queries can carry the conversation history.
class step_tree {
public:
    step_tree() = default;
    explicit step_tree(std::string task) : _task(std::move(task)) {}

    [[nodiscard]] const std::string& task() const noexcept { return _task; }

    // Replaces the children of parent ("" for the top level) and drops their descendants.
    void set_children(std::string_view parent, const std::vector<std::string>& texts, std::string exchange = {});
    void remove_children(std::string_view parent);

    [[nodiscard]] bool contains(std::string_view number) const { return _nodes.find(number) != _nodes.end(); }
    [[nodiscard]] const step_node& at(std::string_view number) const;   // throws precondition_error
    [[nodiscard]] std::vector<std::string> children(std::string_view parent) const;
    [[nodiscard]] bool has_children(std::string_view number) const { return !children(number).empty(); }
    [[nodiscard]] std::vector<step_node> nodes() const;   // document order
    [[nodiscard]] std::vector<std::string> leaves() const;
    [[nodiscard]] std::vector<std::string> leaves_under(std::string_view number) const;
    [[nodiscard]] std::size_t max_depth() const;
    [[nodiscard]] std::size_t size() const noexcept { return _nodes.size(); }
    [[nodiscard]] std::vector<std::pair<std::string, std::string>> sibling_steps(std::string_view parent) const;

    [[nodiscard]] std::optional<std::string> exchange(std::string_view parent) const;
    [[nodiscard]] const std::map<std::string, std::string, dotted_order>& exchanges() const noexcept { return _exchanges; }

    // Violations of the numbering invariants; empty when well formed.
    [[nodiscard]] std::vector<std::string> check() const;

    friend bool operator==(const step_tree&, const step_tree&) = default;

private:
    std::string _task;
    std::map<std::string, step_node, dotted_order> _nodes;
    std::map<std::string, std::string, dotted_order> _exchanges;
};

} // namespace taskfsa
