#include "taskfsa/core/formula.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace taskfsa {

struct formula::node {
    kind type;
    std::string name;
    std::vector<formula> children;
};

namespace {

int compare(const formula& a, const formula& b) {
    if (a.type() != b.type()) return a.type() < b.type() ? -1 : 1;
    if (a.type() == formula::kind::atom) return a.name().compare(b.name());
    const auto& ca = a.children();
    const auto& cb = b.children();
    for (std::size_t i = 0; i < std::min(ca.size(), cb.size()); ++i) {
        if (int c = compare(ca[i], cb[i])) return c;
    }
    if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
    return 0;
}

} // namespace

formula::formula() : formula(top()) {}

formula::formula(std::shared_ptr<const node> n) : _node(std::move(n)) {}

formula formula::top() {
    static const auto shared = std::make_shared<const node>(node{kind::truth, {}, {}});
    return formula(shared);
}

formula formula::bottom() {
    static const auto shared = std::make_shared<const node>(node{kind::disjunction, {}, {}});
    return formula(shared);
}

formula formula::atom(std::string name) {
    return formula(std::make_shared<const node>(node{kind::atom, std::move(name), {}}));
}

formula formula::negation(formula f) {
    return formula(std::make_shared<const node>(node{kind::negation, {}, {std::move(f)}}));
}

formula formula::conjunction(std::vector<formula> fs) {
    if (fs.empty()) return top();
    if (fs.size() == 1) return fs.front();
    return formula(std::make_shared<const node>(node{kind::conjunction, {}, std::move(fs)}));
}

formula formula::disjunction(std::vector<formula> fs) {
    if (fs.size() == 1) return fs.front();
    if (fs.empty()) return bottom();
    return formula(std::make_shared<const node>(node{kind::disjunction, {}, std::move(fs)}));
}

formula::kind formula::type() const noexcept { return _node->type; }
const std::string& formula::name() const noexcept { return _node->name; }
const std::vector<formula>& formula::children() const noexcept { return _node->children; }

bool formula::eval(const valuation& v) const {
    switch (type()) {
    case kind::truth:
        return true;
    case kind::atom:
        return v.contains(name());
    case kind::negation:
        return !children().front().eval(v);
    case kind::conjunction:
        return std::all_of(children().begin(), children().end(),
                           [&](const formula& c) { return c.eval(v); });
    case kind::disjunction:
        return std::any_of(children().begin(), children().end(),
                           [&](const formula& c) { return c.eval(v); });
    }
    return false;
}

void formula::collect_atoms(std::set<std::string>& out) const {
    if (type() == kind::atom) out.insert(name());
    for (const auto& c : children()) c.collect_atoms(out);
}

std::set<std::string> formula::atoms() const {
    std::set<std::string> out;
    collect_atoms(out);
    return out;
}

bool operator==(const formula& a, const formula& b) {
    return a._node == b._node || compare(a, b) == 0;
}

bool operator<(const formula& a, const formula& b) { return compare(a, b) < 0; }

formula f_not(const formula& f) {
    if (f.is_true()) return formula::bottom();
    if (f.is_false()) return formula::top();
    if (f.type() == formula::kind::negation) return f.children().front();
    return formula::negation(f);
}

namespace {

formula join(formula::kind k, const formula& a, const formula& b) {
    std::vector<formula> cs;
    for (const formula* f : {&a, &b}) {
        if (f->type() == k) {
            cs.insert(cs.end(), f->children().begin(), f->children().end());
        } else {
            cs.push_back(*f);
        }
    }
    return k == formula::kind::conjunction ? formula::conjunction(std::move(cs))
                                           : formula::disjunction(std::move(cs));
}

} // namespace

formula f_and(const formula& a, const formula& b) {
    if (a.is_true()) return b;
    if (b.is_true()) return a;
    if (a.is_false() || b.is_false()) return formula::bottom();
    return join(formula::kind::conjunction, a, b);
}

formula f_or(const formula& a, const formula& b) {
    if (a.is_false()) return b;
    if (b.is_false()) return a;
    if (a.is_true() || b.is_true()) return formula::top();
    return join(formula::kind::disjunction, a, b);
}

formula to_nnf(const formula& f) {
    switch (f.type()) {
    case formula::kind::truth:
    case formula::kind::atom:
        return f;
    case formula::kind::negation:
        return negate_to_nnf(f.children().front());
    default: {
        std::vector<formula> cs;
        for (const auto& c : f.children()) cs.push_back(to_nnf(c));
        return f.type() == formula::kind::conjunction ? formula::conjunction(std::move(cs))
                                                      : formula::disjunction(std::move(cs));
    }
    }
}

formula negate_to_nnf(const formula& f) {
    switch (f.type()) {
    case formula::kind::truth:
        return formula::bottom();
    case formula::kind::atom:
        return formula::negation(f);
    case formula::kind::negation:
        return to_nnf(f.children().front());
    default: {
        // Empty conjunction negates to false, empty disjunction to true.
        if (f.children().empty()) {
            return f.type() == formula::kind::conjunction ? formula::bottom() : formula::top();
        }
        std::vector<formula> cs;
        for (const auto& c : f.children()) cs.push_back(negate_to_nnf(c));
        return f.type() == formula::kind::conjunction ? formula::disjunction(std::move(cs))
                                                      : formula::conjunction(std::move(cs));
    }
    }
}

bool is_nnf(const formula& f) {
    if (f.type() == formula::kind::negation) {
        return f.children().front().type() == formula::kind::atom;
    }
    return std::all_of(f.children().begin(), f.children().end(),
                       [](const formula& c) { return is_nnf(c); });
}

namespace {

// Calls fn on every valuation over the atoms; stops early when fn returns false.
template <class Fn>
bool for_all_valuations(const std::vector<std::string>& atoms, Fn&& fn) {
    const std::size_t n = atoms.size();
    if (n > 24) throw std::length_error("too many propositions for truth-table check");
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        valuation v;
        for (std::size_t i = 0; i < n; ++i) {
            if (bits >> i & 1) v.insert(atoms[i]);
        }
        if (!fn(v)) return false;
    }
    return true;
}

} // namespace

bool equivalent(const formula& a, const formula& b) {
    std::set<std::string> all;
    a.collect_atoms(all);
    b.collect_atoms(all);
    std::vector<std::string> atoms(all.begin(), all.end());
    return for_all_valuations(atoms, [&](const valuation& v) { return a.eval(v) == b.eval(v); });
}

bool valid(const formula& f) {
    auto s = f.atoms();
    std::vector<std::string> atoms(s.begin(), s.end());
    return for_all_valuations(atoms, [&](const valuation& v) { return f.eval(v); });
}

bool satisfiable(const formula& f) { return !valid(f_not(f)); }

} // namespace taskfsa
