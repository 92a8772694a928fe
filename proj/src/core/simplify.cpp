#include "taskfsa/core/formula.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <tuple>

namespace taskfsa {

namespace {

// Cube over n atoms: bits set in `care` are fixed to the matching bit of `value`.
struct cube {
    std::uint32_t value;
    std::uint32_t care;

    bool covers(std::uint32_t minterm) const { return (minterm & care) == (value & care); }
    int literals() const { return __builtin_popcount(care); }
    friend bool operator<(const cube& a, const cube& b) {
        return std::tie(a.care, a.value) < std::tie(b.care, b.value);
    }
    friend bool operator==(const cube& a, const cube& b) = default;
};

std::vector<cube> prime_implicants(const std::vector<std::uint32_t>& minterms, std::uint32_t full) {
    std::set<cube> current;
    for (auto m : minterms) current.insert({m, full});
    std::set<cube> primes;
    while (!current.empty()) {
        std::set<cube> next;
        std::set<cube> used;
        std::vector<cube> items(current.begin(), current.end());
        for (std::size_t i = 0; i < items.size(); ++i) {
            for (std::size_t j = i + 1; j < items.size(); ++j) {
                if (items[i].care != items[j].care) continue;
                const std::uint32_t diff = (items[i].value ^ items[j].value) & items[i].care;
                if (__builtin_popcount(diff) != 1) continue;
                const std::uint32_t care = items[i].care & ~diff;
                next.insert({items[i].value & care, care});
                used.insert(items[i]);
                used.insert(items[j]);
            }
        }
        for (const auto& c : items) {
            if (!used.contains(c)) primes.insert(c);
        }
        current = std::move(next);
    }
    return {primes.begin(), primes.end()};
}

formula cube_formula(const cube& c, const std::vector<std::string>& atoms) {
    std::vector<formula> lits;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!(c.care >> i & 1)) continue;
        formula a = formula::atom(atoms[i]);
        lits.push_back((c.value >> i & 1) ? a : formula::negation(a));
    }
    return formula::conjunction(std::move(lits));
}

// Cost used to pick among covers: fewer terms, then fewer literals.
std::pair<std::size_t, int> cost(const std::vector<cube>& cover) {
    int lits = 0;
    for (const auto& c : cover) lits += c.literals();
    return {cover.size(), lits};
}

std::vector<cube> choose_cover(const std::vector<cube>& primes, const std::vector<std::uint32_t>& minterms) {
    std::vector<cube> chosen;
    std::vector<std::uint32_t> open;
    // Essential primes first.
    for (auto m : minterms) {
        const cube* only = nullptr;
        int count = 0;
        for (const auto& p : primes) {
            if (p.covers(m)) {
                only = &p;
                ++count;
            }
        }
        if (count == 1 && std::find(chosen.begin(), chosen.end(), *only) == chosen.end()) {
            chosen.push_back(*only);
        }
    }
    for (auto m : minterms) {
        if (std::none_of(chosen.begin(), chosen.end(), [&](const cube& c) { return c.covers(m); })) {
            open.push_back(m);
        }
    }
    if (open.empty()) return chosen;

    std::vector<cube> rest;
    for (const auto& p : primes) {
        if (std::find(chosen.begin(), chosen.end(), p) == chosen.end()) rest.push_back(p);
    }
    auto covers_all = [&](const std::vector<cube>& extra) {
        return std::all_of(open.begin(), open.end(), [&](std::uint32_t m) {
            return std::any_of(extra.begin(), extra.end(), [&](const cube& c) { return c.covers(m); });
        });
    };

    if (rest.size() <= 16) {
        // Exact: smallest subset, then fewest literals; subsets visited in a fixed order.
        std::vector<cube> best;
        bool found = false;
        for (std::uint32_t mask = 1; mask < (1u << rest.size()); ++mask) {
            std::vector<cube> extra;
            for (std::size_t i = 0; i < rest.size(); ++i) {
                if (mask >> i & 1) extra.push_back(rest[i]);
            }
            if (found && cost(extra) >= cost(best)) continue;
            if (covers_all(extra)) {
                best = std::move(extra);
                found = true;
            }
        }
        chosen.insert(chosen.end(), best.begin(), best.end());
        return chosen;
    }

    // Greedy fallback for large prime sets.
    while (!open.empty()) {
        std::size_t best_i = 0;
        std::size_t best_n = 0;
        for (std::size_t i = 0; i < rest.size(); ++i) {
            std::size_t n = std::count_if(open.begin(), open.end(),
                                          [&](std::uint32_t m) { return rest[i].covers(m); });
            if (n > best_n) {
                best_n = n;
                best_i = i;
            }
        }
        chosen.push_back(rest[best_i]);
        std::erase_if(open, [&](std::uint32_t m) { return rest[best_i].covers(m); });
    }
    return chosen;
}

} // namespace

formula simplify(const formula& f) {
    const auto atom_set = f.atoms();
    std::vector<std::string> atoms(atom_set.begin(), atom_set.end());
    if (atoms.size() > 12) return to_nnf(f);

    const std::uint32_t full = (1u << atoms.size()) - 1;
    std::vector<std::uint32_t> minterms;
    for (std::uint32_t bits = 0; bits <= full; ++bits) {
        valuation v;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (bits >> i & 1) v.insert(atoms[i]);
        }
        if (f.eval(v)) minterms.push_back(bits);
        if (bits == full) break;
    }
    if (minterms.empty()) return formula::bottom();
    if (minterms.size() == std::size_t{full} + 1) return formula::top();

    auto cover = choose_cover(prime_implicants(minterms, full), minterms);
    std::vector<std::pair<std::pair<int, std::string>, formula>> terms;
    for (const auto& c : cover) {
        formula t = cube_formula(c, atoms);
        terms.push_back({{c.literals(), to_text(t)}, t});
    }
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<formula> out;
    for (auto& t : terms) out.push_back(std::move(t.second));
    return formula::disjunction(std::move(out));
}

} // namespace taskfsa
