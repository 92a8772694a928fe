#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace taskfsa {

// A set of propositions that are true.
using valuation = std::set<std::string>;

// Propositional formula over named atoms. Immutable; copies share structure.
// Conjunction and disjunction are n-ary; the empty disjunction is false.
class formula {
public:
    enum class kind { truth, atom, negation, conjunction, disjunction };

    formula();

    [[nodiscard]] static formula top();
    [[nodiscard]] static formula bottom();
    [[nodiscard]] static formula atom(std::string name);
    [[nodiscard]] static formula negation(formula f);
    [[nodiscard]] static formula conjunction(std::vector<formula> fs);
    [[nodiscard]] static formula disjunction(std::vector<formula> fs);

    [[nodiscard]] kind type() const noexcept;
    [[nodiscard]] const std::string& name() const noexcept;
    [[nodiscard]] const std::vector<formula>& children() const noexcept;

    [[nodiscard]] bool is_true() const noexcept { return type() == kind::truth; }
    [[nodiscard]] bool is_false() const noexcept {
        return type() == kind::disjunction && children().empty();
    }

    [[nodiscard]] bool eval(const valuation& v) const;
    [[nodiscard]] std::set<std::string> atoms() const;
    void collect_atoms(std::set<std::string>& out) const;

    // Rename every atom through f; atoms f leaves unchanged stay.
    template <class Fn>
    [[nodiscard]] formula map_atoms(Fn&& f) const;

    friend bool operator==(const formula& a, const formula& b);
    friend bool operator<(const formula& a, const formula& b);

private:
    struct node;
    explicit formula(std::shared_ptr<const node> n);
    std::shared_ptr<const node> _node;
};

[[nodiscard]] formula f_not(const formula& f);
[[nodiscard]] formula f_and(const formula& a, const formula& b);
[[nodiscard]] formula f_or(const formula& a, const formula& b);

// Negation normal form of f itself, and of its negation.
[[nodiscard]] formula to_nnf(const formula& f);
[[nodiscard]] formula negate_to_nnf(const formula& f);

[[nodiscard]] bool is_nnf(const formula& f);
[[nodiscard]] bool equivalent(const formula& a, const formula& b);
[[nodiscard]] bool satisfiable(const formula& f);
[[nodiscard]] bool valid(const formula& f);

// Minimal sum-of-products form. Atoms are ordered by name; the result is
// canonical for equivalent inputs over the same atom set.
[[nodiscard]] formula simplify(const formula& f);

// Text syntax: atoms with spaces written with underscores, ! & | -> ( ),
// true/false. to_text output re-parses to an equal formula.
[[nodiscard]] std::string to_text(const formula& f);
[[nodiscard]] formula parse_formula(std::string_view text);

// Display style: "¬car come ∨ pass", "True".
[[nodiscard]] std::string to_display(const formula& f);

// Proposition names use single spaces; identifiers in text use underscores.
[[nodiscard]] std::string atom_to_identifier(std::string_view name);
[[nodiscard]] std::string identifier_to_atom(std::string_view ident);

template <class Fn>
formula formula::map_atoms(Fn&& f) const {
    switch (type()) {
    case kind::truth:
        return *this;
    case kind::atom:
        return atom(f(name()));
    case kind::negation:
        return negation(children().front().map_atoms(f));
    default: {
        std::vector<formula> cs;
        cs.reserve(children().size());
        for (const auto& c : children()) cs.push_back(c.map_atoms(f));
        return type() == kind::conjunction ? conjunction(std::move(cs))
                                           : disjunction(std::move(cs));
    }
    }
}

} // namespace taskfsa
