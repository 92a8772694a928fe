#pragma once

#include "taskfsa/core/formula.hpp"

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace taskfsa {

// Future-time LTL. Release is kept as a node so negation normal form stays closed.
class ltl_formula {
public:
    enum class op { truth, falsity, atom, negation, conjunction, disjunction, implication,
                    next, until, release, eventually, always };

    [[nodiscard]] static ltl_formula top();
    [[nodiscard]] static ltl_formula bottom();
    [[nodiscard]] static ltl_formula atom(std::string name);
    [[nodiscard]] static ltl_formula unary(op o, ltl_formula a);
    [[nodiscard]] static ltl_formula binary(op o, ltl_formula a, ltl_formula b);

    [[nodiscard]] op type() const noexcept;
    [[nodiscard]] const std::string& name() const noexcept;
    [[nodiscard]] const ltl_formula& lhs() const;
    [[nodiscard]] const ltl_formula& rhs() const;
    [[nodiscard]] std::size_t arity() const noexcept;

    [[nodiscard]] std::size_t size() const;   // node count
    [[nodiscard]] std::set<std::string> atoms() const;

    friend bool operator==(const ltl_formula& a, const ltl_formula& b);

private:
    struct node;
    explicit ltl_formula(std::shared_ptr<const node> n);
    std::shared_ptr<const node> _node;
};

[[nodiscard]] ltl_formula ltl_not(ltl_formula a);

// Precedence, loosest first: ->, |, &, U/R, unary (! X F G).
[[nodiscard]] ltl_formula parse_ltl(std::string_view text);
[[nodiscard]] std::string to_text(const ltl_formula& f);

// Only truth, falsity, atoms, negated atoms, and, or, X, U, R remain.
[[nodiscard]] ltl_formula ltl_nnf(const ltl_formula& f);

// Truth of f at position 0 of the word stem·loop^ω.
[[nodiscard]] bool eval_lasso(const ltl_formula& f, const std::vector<valuation>& stem,
                              const std::vector<valuation>& loop);

} // namespace taskfsa
