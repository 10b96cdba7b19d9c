// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adchain/search.hpp"

namespace adchain {

/// A 3-CNF formula: every clause holds exactly three literals, a literal is a
/// signed 1-based variable index.
struct CnfFormula {
    std::uint32_t num_vars = 0;
    std::vector<std::array<int, 3>> clauses;

    static CnfFormula create(std::uint32_t num_vars, std::vector<std::array<int, 3>> clauses);
};

/// Parses DIMACS CNF. Clauses with one or two literals are padded to three by
/// repeating the last literal; clauses with more than three are rejected.
CnfFormula parse_dimacs(std::string_view text);

/// True iff the assignment (indexed by variable - 1) satisfies every clause.
bool satisfies(const CnfFormula& f, const std::vector<bool>& assignment);

/// The adapter-graph encoding of a formula: a variable-handling path that
/// forces one truth choice per variable, a clause-handling gadget with three
/// alternate paths per clause, and a filter edge that keeps only the clause
/// methods at the target. The formula is satisfiable iff some chain from
/// source to target makes all `threshold` clause methods available.
struct ReductionOutput {
    AdapterGraph graph;
    std::string source;
    std::string target;
    std::uint32_t threshold = 0;
    /// variable index - 1  ->  (positive literal adapter, negative literal adapter)
    std::vector<std::pair<std::string, std::string>> literal_adapters;
};

ReductionOutput reduce_to_chain(const CnfFormula& f);

struct SatResult {
    bool satisfiable = false;
    std::optional<std::vector<bool>> assignment; // indexed by variable - 1
};

/// Size guards for solve_sat_via_chain; the chain search is exponential in
/// the worst case, so oversized formulas are refused rather than hung on.
inline constexpr std::uint32_t kSolveMaxVars = 12;
inline constexpr std::uint32_t kSolveMaxClauses = 12;

/// Decides satisfiability by running the chain search on the reduced graph.
/// A returned assignment is read off the chain's variable-handling edges and
/// re-verified against the formula before being returned.
SatResult solve_sat_via_chain(const CnfFormula& f);

inline constexpr std::uint32_t kBruteForceMaxVars = 20;

/// Exhaustive assignment enumeration; the independent check for the reduction.
bool brute_force_sat(const CnfFormula& f);

} // namespace adchain
