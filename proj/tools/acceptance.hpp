// acceptance.hpp: Pass/fail evaluation of the ten acceptance criteria

#pragma once

#include <iosfwd>
#include <set>

namespace emsim::acceptance {

struct Options {
    bool fast = false;      // 4x relaxed integrator steps; same grids and tolerances
    bool verbose = false;   // experiment progress on standard error
    std::set<int> only;     // empty: all criteria
};

// Prints one line per criterion and its sub-checks. Returns 0 when every failing check is a
// listed expected failure, 2 otherwise.
int run(const Options& opts, std::ostream& out);

}  // namespace emsim::acceptance
