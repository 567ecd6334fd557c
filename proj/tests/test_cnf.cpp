#include "catch2/catch_amalgamated.hpp"

#include "rapidsat/cnf.hpp"
#include "rapidsat/gen.hpp"
#include "rapidsat/rng.hpp"

#include "oracles.hpp"

using namespace rapidsat;

namespace {
Lit lit(int32_t dimacs) { return Lit(dimacs); }
} // namespace

TEST_CASE("literal negation is an involution") {
    for (int32_t code : {1, -1, 7, -42}) {
        Lit l = lit(code);
        REQUIRE(-(-l) == l);
        REQUIRE((-l).var() == l.var());
        REQUIRE((-l).positive() != l.positive());
    }
}

TEST_CASE("parse_dimacs on a plain two-clause instance") {
    Formula f = parse_dimacs("p cnf 2 2\n1 -2 0\n-1 2 0\n");
    REQUIRE(f.num_vars == 2);
    REQUIRE(f.clauses == std::vector<Clause>{{lit(1), lit(-2)}, {lit(-1), lit(2)}});
}

TEST_CASE("parse_dimacs drops tautological clauses") {
    Formula f = parse_dimacs("p cnf 1 1\n1 -1 0\n");
    REQUIRE(f.num_vars == 1);
    REQUIRE(f.clauses.empty());
}

TEST_CASE("parse_dimacs deduplicates literals within a clause") {
    Formula f = parse_dimacs("p cnf 3 1\n2 1 2 3 0\n");
    REQUIRE(f.clauses == std::vector<Clause>{{lit(2), lit(1), lit(3)}});
}

TEST_CASE("parse_dimacs rejects out-of-range literals with the line number") {
    try {
        parse_dimacs("p cnf 3 1\n1 4 0\n");
        FAIL("expected DimacsError");
    } catch (const DimacsError& e) {
        REQUIRE(e.line() == 2);
        REQUIRE_THAT(e.what(), Catch::Matchers::ContainsSubstring("literal 4"));
        REQUIRE_THAT(e.what(), Catch::Matchers::ContainsSubstring("3"));
    }
}

TEST_CASE("parse_dimacs error cases carry line numbers") {
    SECTION("malformed header") {
        try {
            parse_dimacs("c hi\np dnf 3 1\n");
            FAIL("expected DimacsError");
        } catch (const DimacsError& e) {
            REQUIRE(e.line() == 2);
        }
    }
    SECTION("non-integer token") {
        try {
            parse_dimacs("p cnf 3 2\n1 2 0\n1 x 0\n");
            FAIL("expected DimacsError");
        } catch (const DimacsError& e) {
            REQUIRE(e.line() == 3);
            REQUIRE_THAT(e.what(), Catch::Matchers::ContainsSubstring("non-integer"));
        }
    }
    SECTION("unterminated final clause") {
        try {
            parse_dimacs("p cnf 3 2\n1 2 0\n1 3\n");
            FAIL("expected DimacsError");
        } catch (const DimacsError& e) {
            REQUIRE(e.line() == 3);
            REQUIRE_THAT(e.what(), Catch::Matchers::ContainsSubstring("unterminated"));
        }
    }
    SECTION("missing header entirely") {
        REQUIRE_THROWS_AS(parse_dimacs("c only comments\n"), DimacsError);
    }
}

TEST_CASE("parse_dimacs treats the declared clause count as advisory") {
    std::vector<std::string> warnings;
    Formula f = parse_dimacs("p cnf 2 5\n1 2 0\n", &warnings);
    REQUIRE(f.clauses.size() == 1);
    REQUIRE(warnings.size() == 1);
    REQUIRE_THAT(warnings[0], Catch::Matchers::ContainsSubstring("5"));

    warnings.clear();
    parse_dimacs("p cnf 2 1\n1 2 0\n", &warnings);
    REQUIRE(warnings.empty());

    // A dropped tautology still counts as a clause record for the header.
    warnings.clear();
    Formula t = parse_dimacs("p cnf 1 1\n1 -1 0\n", &warnings);
    REQUIRE(t.clauses.empty());
    REQUIRE(warnings.empty());
}

TEST_CASE("parse_dimacs keeps an explicit empty clause") {
    Formula f = parse_dimacs("p cnf 2 2\n0\n1 2 0\n");
    REQUIRE(f.clauses.size() == 2);
    REQUIRE(f.clauses[0].empty());
}

TEST_CASE("parse_dimacs handles comments, blank lines and clauses spanning lines") {
    Formula f = parse_dimacs("c header comment\np cnf 4 2\n\n1 2\n3 0 -1\nc mid comment\n-4 0\n");
    REQUIRE(f.clauses == std::vector<Clause>{{lit(1), lit(2), lit(3)}, {lit(-1), lit(-4)}});
}

TEST_CASE("evaluate checks every clause") {
    Formula f = parse_dimacs("p cnf 2 2\n1 -2 0\n-1 2 0\n");
    FullAssignment both_true(2, true);
    REQUIRE(evaluate(f, both_true));

    Formula contradiction = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n");
    FullAssignment a(1);
    REQUIRE_FALSE(evaluate(contradiction, a));
    a.set(1, true);
    REQUIRE_FALSE(evaluate(contradiction, a));
}

TEST_CASE("evaluate agrees with the enumerator on a uf20-style instance") {
    // 20 variables, 91 clauses at the classic uf20 shape; the satisfying
    // assignment is recovered by exhaustive enumeration.
    Formula f = random_3sat(20, 91, 2);
    Formula parsed = parse_dimacs(write_dimacs(f));
    REQUIRE(parsed == f);
    auto model = oracle::brute_force_model(parsed);
    REQUIRE(model.has_value());
    REQUIRE(evaluate(parsed, *model));
}

TEST_CASE("write_dimacs basic forms") {
    Formula unit;
    unit.num_vars = 1;
    unit.clauses = {{lit(1)}};
    REQUIRE(write_dimacs(unit) == "p cnf 1 1\n1 0\n");

    Formula empty;
    REQUIRE(write_dimacs(empty) == "p cnf 0 0\n");
}

TEST_CASE("round-trip: parse(write(f)) == f for random normalized formulas") {
    SplitMix64 rng(2024);
    for (int i = 0; i < 50; ++i) {
        Formula f = oracle::random_test_formula(rng, 3, 25, 2.0, 5.0);
        REQUIRE(parse_dimacs(write_dimacs(f)) == f);
    }
}

TEST_CASE("evaluate matches a clause-by-clause brute check on random formulas") {
    SplitMix64 rng(99);
    for (int i = 0; i < 30; ++i) {
        Formula f = oracle::random_test_formula(rng, 3, 10, 1.0, 5.0);
        for (int s = 0; s < 20; ++s) {
            uint64_t mask = rng.next_below(uint64_t{1} << f.num_vars);
            FullAssignment a = oracle::assignment_from_mask(f.num_vars, mask);
            bool expected = true;
            for (const Clause& c : f.clauses) {
                bool sat = false;
                for (Lit l : c) sat = sat || (a[l.var()] == l.positive());
                expected = expected && sat;
            }
            REQUIRE(evaluate(f, a) == expected);
        }
    }
}

TEST_CASE("parser output always satisfies the formula invariants") {
    SplitMix64 rng(5150);
    for (int i = 0; i < 40; ++i) {
        Formula f = oracle::random_test_formula(rng, 3, 15, 1.0, 5.0);
        // Inject duplicates and tautologies, then re-parse.
        Formula noisy = f;
        for (Clause& c : noisy.clauses) {
            if (rng.next_bool()) c.push_back(c.front());
            if (rng.next_below(4) == 0) {
                c.push_back(Lit(1, true));
                c.push_back(Lit(1, false));
            }
        }
        Formula parsed = parse_dimacs(write_dimacs(noisy));
        for (const Clause& c : parsed.clauses) {
            for (size_t a = 0; a < c.size(); ++a) {
                REQUIRE(c[a].var() >= 1);
                REQUIRE(c[a].var() <= parsed.num_vars);
                for (size_t b = a + 1; b < c.size(); ++b) {
                    REQUIRE(c[a] != c[b]);
                    REQUIRE(c[a] != -c[b]);
                }
            }
        }
    }
}
