#include <catch2/catch_amalgamated.hpp>

#include "generators.hpp"
#include "spflab/json_io.hpp"

using namespace spflab;
using io::json;

TEST_CASE("SPF JSON schema and field order") {
    const std::string dumped = io::spf_to_json(testgen::f2()).dump();
    // order fixed: poles array of {re, im, mult}
    CHECK(dumped ==
          R"({"poles":[{"re":0.0,"im":-1.0,"mult":1},{"re":0.0,"im":1.0,"mult":1}]})");
}

TEST_CASE("SPF round trip is identical field-for-field") {
    num::Rng rng(139);
    for (int trial = 0; trial < 40; ++trial) {
        const Spf s = testgen::random_spf(rng, 12);
        const Spf back = io::spf_from_json(json::parse(io::spf_to_json(s).dump()));
        REQUIRE(back.poles().size() == s.poles().size());
        for (std::size_t i = 0; i < s.poles().size(); ++i)
            CHECK(back.poles()[i] == s.poles()[i]); // exact, including bit-equal doubles
        CHECK(back.order() == s.order());
    }
}

TEST_CASE("configuration round trip") {
    num::Rng rng(149);
    for (int trial = 0; trial < 20; ++trial) {
        const blaschke::SymmetricConfiguration conf(
            testgen::random_symmetric_upper_poles(rng));
        const auto back =
            io::configuration_from_json(json::parse(io::configuration_to_json(conf).dump()));
        REQUIRE(back.upper_poles().size() == conf.upper_poles().size());
        for (std::size_t i = 0; i < conf.upper_poles().size(); ++i)
            CHECK(back.upper_poles()[i] == conf.upper_poles()[i]);
    }
}

TEST_CASE("parse errors carry the ParseError kind") {
    auto expect_parse_error = [](const char* text) {
        try {
            io::spf_from_json(json::parse(text));
        } catch (const Error& e) {
            return e.kind() == "ParseError";
        }
        return false;
    };
    CHECK(expect_parse_error(R"({"no_poles":[]})"));
    CHECK(expect_parse_error(R"({"poles":[{"re":0.0,"im":1.0}]})"));
    CHECK(expect_parse_error(R"({"poles":[{"re":0.0,"im":1.0,"mult":1.5}]})"));
    CHECK(expect_parse_error(R"({"poles":{}})"));

    // invariant violations surface as their own kinds, not ParseError
    try {
        io::spf_from_json(json::parse(R"({"poles":[{"re":1.0,"im":0.0,"mult":1}]})"));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == "RealPole");
    }
}

TEST_CASE("complex repr") {
    CHECK(io::complex_repr(Complex(1.0, 0.0)) == "1.0+0.0i");
    CHECK(io::complex_repr(Complex(-0.5, -2.25)) == "-0.5-2.25i");
}

TEST_CASE("record JSON is self-consistent") {
    search::SearchConfig cfg;
    cfg.order_n = 2;
    cfg.multiplicity_pattern = {1, 1};
    cfg.multistarts = 2;
    cfg.eval_budget = 200;
    cfg.seed = 5;
    const search::SearchRecord rec = search::optimize(cfg);
    const json j = io::record_to_json(rec);
    CHECK(j["config"]["order_n"] == 2);
    CHECK(j["config"]["p"] == "inf");
    CHECK(j["best_value"].get<double>() == rec.best_value);
    const Spf best = io::spf_from_json(j["best_spf"]);
    CHECK(best.poles() == rec.best_spf.poles());
}
