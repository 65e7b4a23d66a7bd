#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "emosent/csv.hpp"
#include "emosent/date.hpp"
#include "emosent/error.hpp"
#include "emosent/json17.hpp"

using namespace emosent;

TEST_CASE("dates parse and format") {
    auto d = parse_date("2019-03-08");
    REQUIRE(d);
    CHECK(format_date(*d) == "2019-03-08");
    CHECK_FALSE(parse_date("2019-02-30"));
    CHECK_FALSE(parse_date("2019-3-8"));
    CHECK_FALSE(parse_date("not-a-date"));
    CHECK_FALSE(parse_date("2019-03-08x"));
}

TEST_CASE("timestamps normalize to UTC") {
    auto z = parse_timestamp("2019-03-08T23:30:00Z");
    auto off = parse_timestamp("2019-03-09T01:30:00+02:00");
    auto compact = parse_timestamp("2019-03-09 01:30:00+0200");
    auto frac = parse_timestamp("2019-03-08T23:30:00.999Z");
    REQUIRE(z);
    CHECK(*z == *off);
    CHECK(*z == *compact);
    CHECK(*z == *frac);
    CHECK(format_timestamp(*z) == "2019-03-08T23:30:00Z");
    CHECK(format_date(utc_day(*off)) == "2019-03-08");

    auto west = parse_timestamp("2019-03-08T20:00:00-05:00");
    REQUIRE(west);
    CHECK(format_date(utc_day(*west)) == "2019-03-09");

    auto bare = parse_timestamp("2019-03-08");
    REQUIRE(bare);
    CHECK(format_timestamp(*bare) == "2019-03-08T00:00:00Z");

    CHECK_FALSE(parse_timestamp("2019-03-08T25:00:00Z"));
    CHECK_FALSE(parse_timestamp("yesterday"));
    CHECK_FALSE(parse_timestamp("2019-03-08T10:00:00+2"));
}

TEST_CASE("csv reader handles quoting") {
    auto recs = csv::parse("\xEF\xBB\xBFid,text\r\n1,\"a, b\"\n\n2,\"say \"\"hi\"\"\nthere\"\n3,plain");
    REQUIRE(recs.size() == 4);
    CHECK(recs[0].fields == std::vector<std::string>{"id", "text"});
    CHECK(recs[1].fields[1] == "a, b");
    CHECK(recs[2].fields[1] == "say \"hi\"\nthere");
    CHECK(recs[2].line == 4);
    CHECK(recs[3].line == 6);
    CHECK_THROWS_AS(csv::parse("a,\"open\n"), InputError);
}

TEST_CASE("csv writer round-trips") {
    std::ostringstream out;
    csv::write_row(out, {"plain", "with,comma", "with \"quote\"", "line\nbreak", ""});
    auto back = csv::parse(out.str());
    REQUIRE(back.size() == 1);
    CHECK(back[0].fields == std::vector<std::string>{"plain", "with,comma", "with \"quote\"", "line\nbreak", ""});
    CHECK(csv::escape("x") == "x");
}

TEST_CASE("number formatting") {
    CHECK(csv::shortest(0.434) == "0.434");
    CHECK(csv::shortest(1.0) == "1");
    CHECK(csv::fixed17(0.1) == "0.10000000000000001");
    for (double v : {0.1, 1.0 / 3.0, 5.322e4, -2.5e-300}) CHECK(std::stod(csv::fixed17(v)) == v);
}

TEST_CASE("json17 writes full precision") {
    nlohmann::ordered_json j;
    j["b"] = 0.1;
    j["a"] = 3;
    j["nan"] = std::numeric_limits<double>::quiet_NaN();
    j["list"] = {1.0 / 3.0};
    const auto text = dump_json17(j);
    CHECK(text.find("\"b\": 0.10000000000000001") != std::string::npos);
    CHECK(text.find("\"a\": 3") != std::string::npos);
    CHECK(text.find("\"nan\": null") != std::string::npos);
    CHECK(text.find("0.33333333333333331") != std::string::npos);
    CHECK(text.find("\"b\"") < text.find("\"a\""));
    auto back = nlohmann::json::parse(text);
    CHECK(back["list"][0].get<double>() == 1.0 / 3.0);
}
