#pragma once

#include <compare>
#include <map>
#include <vector>

#include "lk/common.hpp"
#include "lk/drivers.hpp"

namespace lk {

// A word over the alphabet {1,2,3,...}. The stored sequence is the written
// order of the monomial; in every integral below the RIGHTMOST letter is the
// innermost (earliest-time) integration and the leftmost the outermost.
struct Word {
    std::vector<int> letters;

    Word() = default;
    explicit Word(std::vector<int> ls) : letters(std::move(ls)) {}

    int weight() const {
        int w = 0;
        for (int a : letters) w += a;
        return w;
    }
    int length() const { return static_cast<int>(letters.size()); }
    bool empty() const { return letters.empty(); }
    Word reversed() const { return Word(std::vector<int>(letters.rbegin(), letters.rend())); }
    Word append(int letter) const {
        Word w = *this;
        w.letters.push_back(letter);
        return w;
    }
    Word concat(const Word& rhs) const {
        Word w = *this;
        w.letters.insert(w.letters.end(), rhs.letters.begin(), rhs.letters.end());
        return w;
    }
    auto operator<=>(const Word&) const = default;
};

// Finite linear combination of words. Zero coefficients are pruned on insert.
struct WordSeries {
    std::map<Word, Complex> terms;

    void add(const Word& w, Complex c) {
        if (c == Complex(0.0, 0.0)) return;
        auto [it, fresh] = terms.emplace(w, c);
        if (!fresh) {
            it->second += c;
            if (it->second == Complex(0.0, 0.0)) terms.erase(it);
        }
    }
    int max_weight() const {
        int w = 0;
        for (const auto& [word, c] : terms) w = std::max(w, word.weight());
        return w;
    }
};

// All 2^(n-1) ordered compositions of n, sorted by length then entries.
// compositions(0) is the single empty composition.
std::vector<std::vector<int>> compositions(int n);

// Sum over all order-preserving interleavings, with multiplicity.
WordSeries shuffle(const Word& u, const Word& v);

// Degree-n slice of the signature element: one word per composition of n,
// each with coefficient 1. Degree 0 is the unit word.
WordSeries s_element_degree(int n);
// All slices 0..W.
std::vector<WordSeries> s_element(int W);

// Weighted iterated integral of the word over [s,t]:
//   I_empty = 1,
//   I_(a,w') (s,t) = int_s^t e^{-a x0(u)} I_{w'}(s,u) dx_a(u)
// peeling the leftmost stored letter; evaluated as one cumulative trapezoid
// sweep per letter, innermost (rightmost) letter first.
Complex iterated_integral(const Word& w, const QuadGrid& grid);
Complex iterated_integral(const Word& w, const DriverSet& ds, double s, double t,
                          int refine = 8);

// Linear extension over a WordSeries, one shared grid for all words.
Complex apply_integral(const WordSeries& ws, const QuadGrid& grid);
Complex apply_integral(const WordSeries& ws, const DriverSet& ds, double s, double t,
                       int refine = 8);

// Independent reference for words of length <= 3: direct sum over the ordered
// simplex of cells on a tensor grid, with factorial weights on diagonal cells
// and midpoint-sampled x0 factors. Deliberately shares no code with
// iterated_integral. steps is the target cell count across [s,t].
Complex brute_force_oracle(const Word& w, const DriverSet& ds, double s, double t,
                           int steps = 600);

} // namespace lk
