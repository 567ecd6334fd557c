#include "catch2/catch_amalgamated.hpp"

#include "rapidsat/restarts.hpp"

#include "oracles.hpp"

using namespace rapidsat;

TEST_CASE("luby_term base cases") {
    REQUIRE(RestartPolicy::luby_term(1) == 1);
    REQUIRE(RestartPolicy::luby_term(7) == 4);
}

TEST_CASE("luby_term first 15 terms") {
    const uint64_t expected[] = {1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8};
    for (uint64_t i = 1; i <= 15; ++i) REQUIRE(RestartPolicy::luby_term(i) == expected[i - 1]);
}

TEST_CASE("luby_term matches the literal recurrence for 10000 terms") {
    uint64_t sum = 0, oracle_sum = 0;
    for (uint64_t i = 1; i <= 10000; ++i) {
        uint64_t t = RestartPolicy::luby_term(i);
        uint64_t o = oracle::luby_recurrence(i);
        REQUIRE(t == o);
        sum += t;
        oracle_sum += o;
    }
    REQUIRE(sum == oracle_sum);
}

TEST_CASE("luby_term peaks: t_(2^k - 1) == 2^(k-1)") {
    for (uint64_t k = 1; k <= 13; ++k) {
        REQUIRE(RestartPolicy::luby_term((uint64_t{1} << k) - 1) == (uint64_t{1} << (k - 1)));
    }
}

TEST_CASE("luby next_limit scales the sequence by the unit run") {
    RestartPolicy p = RestartPolicy::luby(512);
    REQUIRE(p.next_limit() == 512);
    REQUIRE(p.next_limit() == 512);
    REQUIRE(p.next_limit() == 1024);
    REQUIRE(p.next_limit() == 512);

    RestartPolicy identity = RestartPolicy::luby(1);
    for (uint64_t i = 1; i <= 100; ++i) REQUIRE(identity.next_limit() == oracle::luby_recurrence(i));
}

TEST_CASE("fixed policy repeats its size") {
    RestartPolicy p = RestartPolicy::fixed(700);
    for (int i = 0; i < 5; ++i) REQUIRE(p.next_limit() == 700);
}

TEST_CASE("geometric limits grow strictly") {
    RestartPolicy p = RestartPolicy::geometric(100, 1.5);
    uint64_t previous = 0;
    for (int i = 0; i < 30; ++i) {
        uint64_t limit = p.next_limit();
        REQUIRE(limit > previous);
        previous = limit;
    }
    RestartPolicy q = RestartPolicy::geometric(100, 1.5);
    REQUIRE(q.next_limit() == 100);
    REQUIRE(q.next_limit() == 150);
    REQUIRE(q.next_limit() == 225);
}

TEST_CASE("inner-outer limits restart each epoch from base and epochs grow") {
    RestartPolicy p = RestartPolicy::inner_outer(100, 1.1);
    uint64_t previous = 0;
    uint64_t epoch_start_count = 0;
    uint64_t last_epoch_length = 0, epoch_length = 0;
    for (int i = 0; i < 300; ++i) {
        uint64_t limit = p.next_limit();
        if (limit == 100) { // back at base: a new epoch
            ++epoch_start_count;
            if (epoch_start_count > 1) {
                REQUIRE(epoch_length >= last_epoch_length);
                last_epoch_length = epoch_length;
            }
            epoch_length = 0;
        } else {
            REQUIRE(limit > previous); // strictly increasing within an epoch
        }
        ++epoch_length;
        previous = limit;
    }
    REQUIRE(epoch_start_count >= 3);
}

TEST_CASE("should_restart fires at and beyond the limit") {
    REQUIRE_FALSE(should_restart(0, 512));
    REQUIRE(should_restart(512, 512));
    REQUIRE(should_restart(513, 512));
}

TEST_CASE("policy config grammar round-trips") {
    for (const char* spec : {"fixed:700", "luby:6", "geometric:100,1.5", "inout:100,1.1"}) {
        RestartPolicy p = RestartPolicy::parse(spec);
        REQUIRE(p.spec() == spec);
    }
    REQUIRE(RestartPolicy::parse("luby:6").label() == "Luby-6");
    REQUIRE(RestartPolicy::parse("fixed:700").label() == "Fixed-700");
    REQUIRE(RestartPolicy::parse("geometric:100,1.5").label() == "Geometric-100-1.5");
    REQUIRE(RestartPolicy::parse("inout:100,1.1").label() == "InOut-100-1.1");
}

TEST_CASE("policy parse rejects malformed specs") {
    for (const char* bad : {"luby", "luby:", "luby:0", "luby:x", "fixed:-3", "geometric:100",
                            "geometric:100,0.5", "inout:0,1.1", "warp:9", "luby:6,7"}) {
        REQUIRE_THROWS_AS(RestartPolicy::parse(bad), std::invalid_argument);
    }
}

TEST_CASE("two policies from the same spec produce identical limit streams") {
    for (const char* spec : {"fixed:3", "luby:8", "geometric:2,1.3", "inout:4,1.5"}) {
        RestartPolicy a = RestartPolicy::parse(spec);
        RestartPolicy b = RestartPolicy::parse(spec);
        for (int i = 0; i < 200; ++i) REQUIRE(a.next_limit() == b.next_limit());
    }
}
