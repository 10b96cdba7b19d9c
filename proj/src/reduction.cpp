// SPDX-License-Identifier: Apache-2.0
#include "adchain/reduction.hpp"

#include <algorithm>
#include <sstream>

namespace adchain {

CnfFormula CnfFormula::create(std::uint32_t num_vars, std::vector<std::array<int, 3>> clauses) {
    if (num_vars == 0)
        throw InvalidInput("formula needs at least one variable");
    if (clauses.empty())
        throw InvalidInput("formula needs at least one clause");
    for (std::size_t n = 0; n < clauses.size(); ++n)
        for (int lit : clauses[n]) {
            if (lit == 0 || static_cast<std::uint32_t>(std::abs(lit)) > num_vars)
                throw InvalidInput("clause " + std::to_string(n + 1) + ": literal " +
                                   std::to_string(lit) + " out of range for " +
                                   std::to_string(num_vars) + " variables");
        }
    CnfFormula f;
    f.num_vars = num_vars;
    f.clauses = std::move(clauses);
    return f;
}

CnfFormula parse_dimacs(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    bool have_header = false;
    std::uint32_t num_vars = 0;
    std::size_t expected_clauses = 0;
    std::vector<std::array<int, 3>> clauses;
    std::vector<int> current;

    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        if (line[first] == 'c')
            continue;
        if (line[first] == 'p') {
            if (have_header)
                throw InvalidInput("line " + std::to_string(line_no) + ": duplicate header");
            std::istringstream hdr(line);
            std::string p, fmt;
            long long v = 0, c = 0;
            if (!(hdr >> p >> fmt >> v >> c) || p != "p" || fmt != "cnf" || v < 1 || c < 1)
                throw InvalidInput("line " + std::to_string(line_no) +
                                   ": malformed header, expected \"p cnf <vars> <clauses>\"");
            num_vars = static_cast<std::uint32_t>(v);
            expected_clauses = static_cast<std::size_t>(c);
            have_header = true;
            continue;
        }
        if (!have_header)
            throw InvalidInput("line " + std::to_string(line_no) + ": clause before header");
        std::istringstream body(line);
        int lit;
        while (body >> lit) {
            if (lit == 0) {
                if (current.empty())
                    throw InvalidInput("line " + std::to_string(line_no) + ": empty clause");
                if (current.size() > 3)
                    throw InvalidInput("line " + std::to_string(line_no) + ": clause has " +
                                       std::to_string(current.size()) +
                                       " literals, at most 3 allowed");
                while (current.size() < 3)
                    current.push_back(current.back());
                clauses.push_back({current[0], current[1], current[2]});
                current.clear();
            } else {
                current.push_back(lit);
            }
        }
        if (!body.eof())
            throw InvalidInput("line " + std::to_string(line_no) + ": unexpected token");
    }
    if (!have_header)
        throw InvalidInput("missing \"p cnf\" header");
    if (!current.empty())
        throw InvalidInput("unterminated clause at end of input");
    if (clauses.size() != expected_clauses)
        throw InvalidInput("header declares " + std::to_string(expected_clauses) +
                           " clauses but " + std::to_string(clauses.size()) + " were given");
    return CnfFormula::create(num_vars, std::move(clauses));
}

bool satisfies(const CnfFormula& f, const std::vector<bool>& assignment) {
    if (assignment.size() != f.num_vars)
        throw InvalidInput("assignment covers " + std::to_string(assignment.size()) +
                           " variables, formula has " + std::to_string(f.num_vars));
    for (const auto& clause : f.clauses) {
        bool ok = false;
        for (int lit : clause) {
            const bool value = assignment[static_cast<std::size_t>(std::abs(lit)) - 1];
            if (lit > 0 ? value : !value) {
                ok = true;
                break;
            }
        }
        if (!ok)
            return false;
    }
    return true;
}

namespace {

using Grid = std::vector<std::vector<bool>>;

Grid identity_grid(std::uint32_t n) {
    Grid g(n, std::vector<bool>(n, false));
    for (std::uint32_t j = 0; j < n; ++j)
        g[j][j] = true;
    return g;
}

// Slot layout of every non-target interface: dummy, then one method per
// clause, then the literal pair of each variable.
std::uint32_t clause_slot(std::uint32_t clause_1based) {
    return clause_1based;
}

std::uint32_t literal_slot(std::uint32_t num_clauses, std::uint32_t var_1based, bool positive) {
    return num_clauses + 2 * (var_1based - 1) + (positive ? 1 : 2);
}

} // namespace

ReductionOutput reduce_to_chain(const CnfFormula& f) {
    const std::uint32_t v = f.num_vars;
    const std::uint32_t c = static_cast<std::uint32_t>(f.clauses.size());
    const std::uint32_t dim = 1 + c + 2 * v;

    std::vector<std::string> methods; // shared by every node except the target
    for (std::uint32_t i = 1; i <= c; ++i)
        methods.push_back("c" + std::to_string(i));
    for (std::uint32_t k = 1; k <= v; ++k) {
        methods.push_back("v" + std::to_string(k) + "+");
        methods.push_back("v" + std::to_string(k) + "-");
    }
    std::vector<std::string> clause_methods(methods.begin(), methods.begin() + c);

    std::vector<InterfaceSpec> interfaces;
    interfaces.push_back({"S", methods});
    for (std::uint32_t k = 1; k <= v; ++k)
        interfaces.push_back({"V" + std::to_string(k), methods});
    for (std::uint32_t i = 1; i <= c; ++i) {
        for (std::uint32_t j = 1; j <= 3; ++j)
            interfaces.push_back({"C" + std::to_string(i) + "_" + std::to_string(j), methods});
        interfaces.push_back({"C" + std::to_string(i), methods});
    }
    interfaces.push_back({"T", clause_methods});

    std::vector<AdapterSpec> adapters;
    ReductionOutput out;

    // Variable handling: between V_{k-1} and V_k, one adapter grants the
    // positive literal method unconditionally and kills the negative one,
    // the other does the mirror image. Everything else passes through.
    std::string prev = "S";
    for (std::uint32_t k = 1; k <= v; ++k) {
        const std::string node = "V" + std::to_string(k);
        for (bool positive : {true, false}) {
            Grid grid = identity_grid(dim);
            const std::uint32_t granted = literal_slot(c, k, positive);
            const std::uint32_t killed = literal_slot(c, k, !positive);
            std::fill(grid[granted].begin(), grid[granted].end(), false);
            std::fill(grid[killed].begin(), grid[killed].end(), false);
            grid[killed][0] = true;
            AdapterSpec ad;
            ad.name = "choose_v" + std::to_string(k) + (positive ? "_true" : "_false");
            ad.source = prev;
            ad.target = node;
            ad.matrix = MethodDependencyMatrix::from_rows(grid);
            adapters.push_back(std::move(ad));
        }
        out.literal_adapters.emplace_back("choose_v" + std::to_string(k) + "_true",
                                          "choose_v" + std::to_string(k) + "_false");
        prev = node;
    }

    // Clause handling: three alternate paths from C_{i-1} to C_i, one per
    // literal. The entry edge rewires the clause method to depend exactly on
    // its literal's method; the exit edge is the identity.
    for (std::uint32_t i = 1; i <= c; ++i) {
        const std::string node = "C" + std::to_string(i);
        for (std::uint32_t j = 1; j <= 3; ++j) {
            const std::string sub = node + "_" + std::to_string(j);
            const int lit = f.clauses[i - 1][j - 1];
            Grid grid = identity_grid(dim);
            const std::uint32_t row = clause_slot(i);
            std::fill(grid[row].begin(), grid[row].end(), false);
            grid[row][literal_slot(c, static_cast<std::uint32_t>(std::abs(lit)), lit > 0)] = true;
            AdapterSpec via;
            via.name = "clause" + std::to_string(i) + "_via" + std::to_string(j);
            via.source = prev;
            via.target = sub;
            via.matrix = MethodDependencyMatrix::from_rows(grid);
            adapters.push_back(std::move(via));

            AdapterSpec done;
            done.name = "clause" + std::to_string(i) + "_done" + std::to_string(j);
            done.source = sub;
            done.target = node;
            done.matrix = identity(dim);
            adapters.push_back(std::move(done));
        }
        prev = node;
    }

    // Filter: keep the dummy and clause methods, discard the literals.
    Grid filter(1 + c, std::vector<bool>(dim, false));
    filter[0][0] = true;
    for (std::uint32_t i = 1; i <= c; ++i)
        filter[i][clause_slot(i)] = true;
    AdapterSpec ad;
    ad.name = "filter";
    ad.source = prev;
    ad.target = "T";
    ad.matrix = MethodDependencyMatrix::from_rows(filter);
    adapters.push_back(std::move(ad));

    out.graph = AdapterGraph::create(std::move(interfaces), std::move(adapters));
    out.source = "S";
    out.target = "T";
    out.threshold = c;
    return out;
}

SatResult solve_sat_via_chain(const CnfFormula& f) {
    if (f.num_vars > kSolveMaxVars || f.clauses.size() > kSolveMaxClauses)
        throw GuardExceeded("solve_sat_via_chain refuses formulas beyond " +
                            std::to_string(kSolveMaxVars) + " variables / " +
                            std::to_string(kSolveMaxClauses) + " clauses");

    const ReductionOutput red = reduce_to_chain(f);
    const SearchOutcome out = greedy_chain(red.graph, red.source, red.target);
    if (!out.found())
        throw std::logic_error("reduction graph has no chain from source to target");

    SatResult result;
    result.satisfiable = norm(*out.availability) == red.threshold;
    if (!result.satisfiable)
        return result;

    std::vector<bool> assignment(f.num_vars, false);
    for (std::uint32_t k = 0; k < f.num_vars; ++k) {
        const auto& [pos, neg] = red.literal_adapters[k];
        const auto& edges = out.chain->edges;
        const bool has_pos = std::find(edges.begin(), edges.end(), pos) != edges.end();
        const bool has_neg = std::find(edges.begin(), edges.end(), neg) != edges.end();
        if (has_pos == has_neg)
            throw std::logic_error("chain does not pick exactly one literal adapter for v" +
                                   std::to_string(k + 1));
        assignment[k] = has_pos;
    }
    if (!satisfies(f, assignment))
        throw std::logic_error("extracted assignment does not satisfy the formula");
    result.assignment = std::move(assignment);
    return result;
}

bool brute_force_sat(const CnfFormula& f) {
    if (f.num_vars > kBruteForceMaxVars)
        throw GuardExceeded("brute_force_sat refuses formulas beyond " +
                            std::to_string(kBruteForceMaxVars) + " variables");
    std::vector<bool> assignment(f.num_vars);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << f.num_vars); ++mask) {
        for (std::uint32_t k = 0; k < f.num_vars; ++k)
            assignment[k] = (mask >> k) & 1;
        if (satisfies(f, assignment))
            return true;
    }
    return false;
}

} // namespace adchain
