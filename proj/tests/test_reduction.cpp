// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adchain/reduction.hpp"
#include "test_support.hpp"

using namespace adchain;
using testsupport::Rng;

namespace {

CnfFormula random_formula(Rng& rng, std::uint32_t max_vars, std::uint32_t max_clauses) {
    const std::uint32_t v = rng.between(1, max_vars);
    const std::uint32_t c = rng.between(1, max_clauses);
    std::vector<std::array<int, 3>> clauses(c);
    for (auto& clause : clauses)
        for (int& lit : clause) {
            lit = static_cast<int>(rng.between(1, v));
            if (rng.chance(0.5))
                lit = -lit;
        }
    return CnfFormula::create(v, std::move(clauses));
}

} // namespace

TEST_CASE("parse_dimacs pads short clauses") {
    const CnfFormula one = parse_dimacs("p cnf 1 1\n1 0\n");
    CHECK(one.num_vars == 1);
    REQUIRE(one.clauses.size() == 1);
    CHECK(one.clauses[0] == std::array<int, 3>{1, 1, 1});

    const CnfFormula two = parse_dimacs("p cnf 2 2\n1 -2 0\n-1 2 0\n");
    REQUIRE(two.clauses.size() == 2);
    CHECK(two.clauses[0] == std::array<int, 3>{1, -2, -2});
    CHECK(two.clauses[1] == std::array<int, 3>{-1, 2, 2});
}

TEST_CASE("parse_dimacs accepts comments and split clauses") {
    const CnfFormula f = parse_dimacs("c a comment\np cnf 3 2\nc another\n1 2 3 0\n-1\n-2 -3 0\n");
    CHECK(f.num_vars == 3);
    REQUIRE(f.clauses.size() == 2);
    CHECK(f.clauses[1] == std::array<int, 3>{-1, -2, -3});
}

TEST_CASE("parse_dimacs rejections") {
    CHECK_THROWS_AS(parse_dimacs("p cnf 4 1\n1 2 3 4 0\n"), InvalidInput);
    CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n0\n"), InvalidInput);          // empty clause
    CHECK_THROWS_AS(parse_dimacs("p dnf 1 1\n1 0\n"), InvalidInput);        // bad format tag
    CHECK_THROWS_AS(parse_dimacs("p cnf 0 1\n1 0\n"), InvalidInput);        // no variables
    CHECK_THROWS_AS(parse_dimacs("1 0\n"), InvalidInput);                   // clause before header
    CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n2 0\n"), InvalidInput);        // literal out of range
    CHECK_THROWS_AS(parse_dimacs("p cnf 1 2\n1 0\n"), InvalidInput);        // clause count mismatch
    CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n1\n"), InvalidInput);          // unterminated clause
    CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n1 x 0\n"), InvalidInput);      // junk token
    CHECK_THROWS_AS(parse_dimacs(""), InvalidInput);                        // missing header
}

TEST_CASE("reduction size law") {
    auto count_check = [](std::uint32_t v, std::uint32_t c, const ReductionOutput& red) {
        CHECK(red.graph.interfaces().size() == v + 4 * c + 2);
        CHECK(red.graph.adapters().size() == 2 * v + 6 * c + 1);
        CHECK(red.threshold == c);
        CHECK(red.literal_adapters.size() == v);
        const std::uint32_t bound = (1 + c + 2 * v) * (1 + c + 2 * v);
        for (const auto& ad : red.graph.adapters())
            CHECK(ad.matrix.rows() * ad.matrix.cols() <= bound);
    };
    count_check(3, 2,
                reduce_to_chain(CnfFormula::create(3, {{1, 2, 3}, {-1, -2, -3}})));
    count_check(1, 1, reduce_to_chain(CnfFormula::create(1, {{1, 1, 1}})));

    Rng rng(5);
    for (int iter = 0; iter < 25; ++iter) {
        const CnfFormula f = random_formula(rng, 6, 6);
        count_check(f.num_vars, static_cast<std::uint32_t>(f.clauses.size()), reduce_to_chain(f));
    }
}

TEST_CASE("reduced graphs round-trip through the file format") {
    const ReductionOutput red = reduce_to_chain(CnfFormula::create(2, {{1, -2, 2}}));
    const std::string bytes = serialize_graph(red.graph);
    CHECK(parse_graph(bytes) == red.graph);
    CHECK(serialize_graph(parse_graph(bytes)) == bytes);
}

TEST_CASE("variable handling forces exactly one literal per variable") {
    const CnfFormula f = CnfFormula::create(2, {{1, 2, 2}});
    const ReductionOutput red = reduce_to_chain(f);
    const auto paths = enumerate_chains(red.graph, "S", "V2");
    CHECK(paths.size() == 4); // 2^v assignments
    for (const Chain& path : paths) {
        const auto avail = apply(path.composed, full_availability(path.composed.cols()));
        const InterfaceSpec* node = red.graph.find_interface("V2");
        for (std::uint32_t var = 1; var <= 2; ++var) {
            std::uint32_t seen = 0;
            for (std::uint32_t i = 0; i < node->methods.size(); ++i) {
                const std::string& m = node->methods[i];
                if (m == "v" + std::to_string(var) + "+" || m == "v" + std::to_string(var) + "-")
                    if (avail.test(i + 1))
                        ++seen;
            }
            CHECK(seen == 1);
        }
    }
}

TEST_CASE("the filter keeps clause slots and discards literals") {
    const CnfFormula f = CnfFormula::create(2, {{1, -2, 1}});
    const ReductionOutput red = reduce_to_chain(f);
    const auto chains = enumerate_chains(red.graph, "S", "T");
    REQUIRE(!chains.empty());
    for (const Chain& c : chains) {
        REQUIRE(c.edges.back() == "filter");
        const auto at_target = apply(c.composed, full_availability(c.composed.cols()));
        // Recompute availability just before the filter edge.
        MethodDependencyMatrix prefix = dependency_matrix_of(red.graph, c.edges.front());
        for (std::size_t k = 1; k + 1 < c.edges.size(); ++k)
            prefix = compose(dependency_matrix_of(red.graph, c.edges[k]), prefix);
        const auto before = apply(prefix, full_availability(prefix.cols()));
        CHECK(at_target.dim() == red.threshold + 1);
        for (std::uint32_t i = 0; i <= red.threshold; ++i)
            CHECK(at_target.test(i) == before.test(i));
    }
}

TEST_CASE("solve_sat_via_chain on forced instances") {
    const SatResult forced = solve_sat_via_chain(CnfFormula::create(1, {{1, 1, 1}}));
    REQUIRE(forced.satisfiable);
    REQUIRE(forced.assignment.has_value());
    CHECK(*forced.assignment == std::vector<bool>{true});

    const SatResult contra = solve_sat_via_chain(CnfFormula::create(1, {{1, 1, 1}, {-1, -1, -1}}));
    CHECK_FALSE(contra.satisfiable);
    CHECK_FALSE(contra.assignment.has_value());
}

TEST_CASE("solve guard refuses oversized formulas") {
    std::vector<std::array<int, 3>> clauses{{1, 1, 1}};
    CHECK_THROWS_AS(solve_sat_via_chain(CnfFormula::create(kSolveMaxVars + 1, clauses)),
                    GuardExceeded);
    std::vector<std::array<int, 3>> many(kSolveMaxClauses + 1, {1, 1, 1});
    CHECK_THROWS_AS(solve_sat_via_chain(CnfFormula::create(1, many)), GuardExceeded);
}

TEST_CASE("brute_force_sat basics and guard") {
    CHECK(brute_force_sat(CnfFormula::create(3, {{1, 2, 3}})));
    CHECK_FALSE(brute_force_sat(CnfFormula::create(1, {{1, 1, 1}, {-1, -1, -1}})));
    std::vector<std::array<int, 3>> clauses{{1, 1, 1}};
    CHECK_THROWS_AS(brute_force_sat(CnfFormula::create(kBruteForceMaxVars + 1, clauses)),
                    GuardExceeded);
}

TEST_CASE("chain solving agrees with brute force on random formulas") {
    Rng rng(97);
    for (int iter = 0; iter < 60; ++iter) {
        const CnfFormula f = random_formula(rng, 4, 4);
        const SatResult via_chain = solve_sat_via_chain(f);
        CHECK(via_chain.satisfiable == brute_force_sat(f));
        if (via_chain.satisfiable) {
            REQUIRE(via_chain.assignment.has_value());
            CHECK(satisfies(f, *via_chain.assignment));
        }
    }
}

TEST_CASE("formula validation") {
    CHECK_THROWS_AS(CnfFormula::create(0, {{1, 1, 1}}), InvalidInput);
    CHECK_THROWS_AS(CnfFormula::create(1, {}), InvalidInput);
    CHECK_THROWS_AS(CnfFormula::create(1, {{0, 1, 1}}), InvalidInput);
    CHECK_THROWS_AS(CnfFormula::create(1, {{2, 1, 1}}), InvalidInput);
    CHECK_THROWS_AS(satisfies(CnfFormula::create(2, {{1, 2, 2}}), {true}), InvalidInput);
}
