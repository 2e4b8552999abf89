#pragma once

#include <string>
#include <vector>

#include "treesched/tree.hpp"

namespace treesched {

/// Exact nonnegative rational, kept as an integer pair so bound checks never
/// go through floating point.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_string() const;  // decimal with 6 digits

    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator==(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

    /// value <= num/den, exactly.
    bool at_most(std::int64_t value) const {
        return static_cast<__int128>(value) * den >= num;
    }
};

struct BoundsReport {
    Rational work_over_p;
    TimeUnits critical_path = 0;
    Rational makespan_lb;            // max of the two above
    MemUnits mem_time_product_lb = 0;
};

/// w-weighted length of the path from each node to the root, inclusive.
std::vector<TimeUnits> depths(const TaskTree& tree);  // index id-1

/// max(total work / p, weighted critical path); valid for any schedule.
Rational makespan_lower_bound(const TaskTree& tree, int p);

/// Lemma-style bound: peak * makespan >= sum over i of
/// (n_i + f_i + inputs(i)) * w_i for every schedule.
MemUnits memory_makespan_product_bound(const TaskTree& tree);

BoundsReport compute_bounds(const TaskTree& tree, int p);

}  // namespace treesched
