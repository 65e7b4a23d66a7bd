#include <doctest.h>

#include <algorithm>
#include <set>

#include "emosent/corpus.hpp"
#include "emosent/error.hpp"

using namespace emosent;

namespace {

Tweet tweet(std::string id, std::string ts, std::string text) {
    return {std::move(id), *parse_timestamp(ts), std::move(text)};
}

}  // namespace

TEST_CASE("tweets load from csv") {
    auto one = parse_tweets("id,timestamp,text\n1,2019-03-08T10:00:00Z,gm \xF0\x9F\x9A\x80\n", TweetFormat::csv);
    REQUIRE(one.items.size() == 1);
    CHECK(one.items[0].text == "gm \xF0\x9F\x9A\x80");
    CHECK(one.errors.empty());

    auto mixed = parse_tweets("id,timestamp,text\n"
                              "1,2019-03-08T10:00:00Z,first\n"
                              "2,not-a-date,bad\n"
                              "3,2019-03-09T00:00:01Z,\"third, with comma\"\n"
                              "4,2019-03-08T23:59:59Z,fourth\n",
                              TweetFormat::csv);
    REQUIRE(mixed.items.size() == 3);
    REQUIRE(mixed.errors.size() == 1);
    CHECK(mixed.errors[0].line == 3);
    CHECK(mixed.items[0].id == "1");
    CHECK(mixed.items[1].text == "third, with comma");
    CHECK(mixed.items[2].id == "4");
    std::set<Date> days;
    for (const auto& t : mixed.items) days.insert(t.day());
    CHECK(days.size() == 2);
}

TEST_CASE("tweet loading errors") {
    CHECK_THROWS_AS(parse_tweets("id,text\n1,hi\n", TweetFormat::csv), InputError);
    CHECK_THROWS_AS(parse_tweets("id,timestamp,text\n1,bad,hi\n", TweetFormat::csv), InputError);
    CHECK_THROWS_AS(parse_tweets("", TweetFormat::csv), InputError);
    CHECK_THROWS_AS(load_tweets("/nonexistent/tweets.csv", TweetFormat::csv), InputError);

    auto extra = parse_tweets("lang,text,id,timestamp\nen,hello,7,2019-03-08\n", TweetFormat::csv);
    REQUIRE(extra.items.size() == 1);
    CHECK(extra.items[0].id == "7");
}

TEST_CASE("tweets load from jsonl") {
    auto r = parse_tweets("{\"id\": 1, \"timestamp\": \"2019-03-08T10:00:00Z\", \"text\": \"a\"}\n"
                          "{\"id\": \"x\", \"timestamp\": \"2019-03-08\"}\n"
                          "not json\n"
                          "{\"id\": \"2\", \"timestamp\": \"2019-03-09T10:00:00Z\", \"text\": \"b\"}\n",
                          TweetFormat::jsonl);
    REQUIRE(r.items.size() == 2);
    CHECK(r.items[0].id == "1");
    CHECK(r.items[1].text == "b");
    CHECK(r.errors.size() == 2);
    CHECK(tweet_format_for("a/b.jsonl") == TweetFormat::jsonl);
    CHECK(tweet_format_for("a/b.NDJSON") == TweetFormat::jsonl);
    CHECK(tweet_format_for("a/b.csv") == TweetFormat::csv);
}

TEST_CASE("prices load sorted with row errors") {
    auto ok = parse_prices("date,close\n2019-03-08,3900.0\n2019-03-09,3910.5\n");
    REQUIRE(ok.items.size() == 2);
    CHECK(ok.items[1].close == 3910.5);

    auto dup = parse_prices("date,close\n2019-03-09,2\n2019-03-08,1\n2019-03-09,3\n");
    REQUIRE(dup.items.size() == 2);
    CHECK(format_date(dup.items[0].date) == "2019-03-08");
    CHECK(dup.items[1].close == 2.0);
    REQUIRE(dup.errors.size() == 1);
    CHECK(dup.errors[0].message.find("2019-03-09") != std::string::npos);

    auto neg = parse_prices("date,close\n2019-03-08,-1\n2019-03-09,5\n");
    REQUIRE(neg.errors.size() == 1);
    CHECK(neg.errors[0].message.find("non-positive price") != std::string::npos);
    CHECK_THROWS_AS(parse_prices("date,close\n2019-03-08,0\n"), InputError);
    CHECK_THROWS_AS(parse_prices("date,price\n2019-03-08,1\n"), InputError);
}

TEST_CASE("dated series reader") {
    auto r = parse_dated_series("date,text_sentiment\n2019-03-08,-0.5\n2019-03-09,abc\n", "text_sentiment");
    REQUIRE(r.items.size() == 1);
    CHECK(r.items[0].value == -0.5);
    CHECK(r.errors.size() == 1);
}

TEST_CASE("filter_emoji_tweets") {
    std::vector<Tweet> ts{tweet("1", "2019-03-08", "hello"), tweet("2", "2019-03-08", "gm \xF0\x9F\x9A\x80"),
                          tweet("3", "2019-03-08", "1\xEF\xB8\x8F"), tweet("4", "2019-03-08", "1")};
    auto kept = filter_emoji_tweets(ts);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].id == "2");
    CHECK(filter_emoji_tweets({}).empty());
}

TEST_CASE("sample_daily draws without replacement per day") {
    std::vector<Tweet> ts;
    for (int i = 0; i < 100; ++i) ts.push_back(tweet("a" + std::to_string(i), "2019-03-08T12:00:00Z", "x"));
    for (int i = 0; i < 3; ++i) ts.push_back(tweet("b" + std::to_string(i), "2019-03-09T12:00:00Z", "x"));

    auto s1 = sample_daily(ts, 50, 1);
    REQUIRE(s1.size() == 2);
    CHECK(s1[0].tweets.size() == 50);
    CHECK(s1[1].tweets.size() == 3);
    CHECK(s1[1].tweets[0].id == "b0");
    CHECK(s1[1].tweets[2].id == "b2");

    std::set<std::string> ids;
    for (const auto& t : s1[0].tweets) {
        CHECK(t.id[0] == 'a');
        ids.insert(t.id);
    }
    CHECK(ids.size() == 50);

    auto again = sample_daily(ts, 50, 1);
    auto other = sample_daily(ts, 50, 2);
    CHECK(again[0].tweets == s1[0].tweets);
    CHECK(other[0].tweets != s1[0].tweets);
    CHECK(s1[0].seed == day_seed(1, s1[0].date));
    CHECK(day_seed(1, s1[0].date) != day_seed(1, s1[1].date));
}

TEST_CASE("a day's draw does not depend on other days") {
    std::vector<Tweet> a, b;
    for (int i = 0; i < 80; ++i) a.push_back(tweet(std::to_string(i), "2019-03-08T12:00:00Z", "x"));
    b = a;
    for (int i = 0; i < 30; ++i) b.push_back(tweet("z" + std::to_string(i), "2019-03-07T12:00:00Z", "x"));
    auto sa = sample_daily(a, 10, 9), sb = sample_daily(b, 10, 9);
    REQUIRE(sb.size() == 2);
    CHECK(sa[0].tweets == sb[1].tweets);
}
