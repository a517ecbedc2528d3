#include "doctest.h"

#include "polyhom/selftest.hpp"

using namespace polyhom;

TEST_CASE("quick sweep passes and reports every criterion") {
    SelftestOptions opt;
    opt.quick = true;
    const auto results = run_selftest(opt);
    REQUIRE(results.size() == 9);
    for (std::size_t i = 0; i < results.size(); ++i) {
        CHECK(results[i].id == static_cast<int>(i) + 1);
        CHECK_MESSAGE(results[i].passed, results[i].line());
        CHECK(results[i].line().rfind("PASS criterion", 0) == 0);
    }
    CHECK(all_passed(results));
}

TEST_CASE("an injected fault fails criterion 2 with a counterexample") {
    SelftestOptions opt;
    opt.quick = true;
    opt.inject_fault = true;
    opt.only = {2};
    const auto results = run_selftest(opt);
    REQUIRE(results.size() == 1);
    CHECK_FALSE(results[0].passed);
    CHECK(results[0].witness.at("check") == "associativity");
    CHECK_FALSE(all_passed(results));
    // same verdict on a second run
    CHECK(run_selftest(opt)[0].detail == results[0].detail);
}

TEST_CASE("planted faults") {
    const auto G = FinAbelianGroup::cyclic(3);
    const auto clean = standard(G, 4, 2);
    CHECK(check_axioms(clean).passed());
    const auto dup = plant_horn_duplicate(clean);
    CHECK_FALSE(check_axioms(dup).find("horn-uniqueness")->passed);
    const auto na = plant_non_associative(G, 4, 2);
    CHECK(check_axioms(na).passed());
    CHECK_FALSE(check_associativity(na).passed());
    CHECK_THROWS(plant_non_associative(FinAbelianGroup::cyclic(1), 4, 2));
}

TEST_CASE("unknown criterion") { CHECK_THROWS_AS(run_criterion(10, {}), std::invalid_argument); }
