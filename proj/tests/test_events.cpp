#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "bchange/calendar.hpp"
#include "bchange/events.hpp"

using namespace bchange;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path("/tmp/bchange_test_" + name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

std::string event_line(const std::string& id, std::int64_t ts, const std::string& action,
                       int mentions = 0) {
    return "{\"account_id\":\"" + id + "\",\"timestamp\":" + std::to_string(ts) +
           ",\"action\":\"" + action +
           "\",\"text_terms\":1,\"links\":0,\"hashtags\":0,\"media\":0,\"mentions\":" +
           std::to_string(mentions) + "}\n";
}

}  // namespace

TEST_SUITE("events") {

TEST_CASE("three lines one account") {
    TempFile f("three.jsonl", event_line("a", 100, "reply") + event_line("a", 200, "post") +
                                  event_line("a", 300, "reshare"));
    const auto r = ingest::load_events(f.path);
    REQUIRE(r.accounts.size() == 1);
    CHECK(r.accounts[0].account_id == "a");
    REQUIRE(r.accounts[0].events.size() == 3);
    CHECK(r.accounts[0].events[0].action == ingest::Action::reply);
    CHECK(r.accounts[0].events[2].action == ingest::Action::reshare);
    CHECK(r.report.records_ok == 3);
    CHECK(r.report.malformed_total == 0);
}

TEST_CASE("empty file") {
    TempFile f("empty.jsonl", "");
    const auto r = ingest::load_events(f.path);
    CHECK(r.accounts.empty());
    CHECK(r.report.lines_total == 0);
    CHECK(r.report.records_ok == 0);
}

TEST_CASE("one malformed line among ten is reported with its line number") {
    std::string content;
    for (int i = 0; i < 5; ++i) content += event_line("a", 100 + i, "post");
    content += "{\"account_id\":\"a\",\"timestamp\":999}\n";  // line 6: missing action
    for (int i = 0; i < 4; ++i) content += event_line("b", 200 + i, "reply");
    TempFile f("malformed.jsonl", content);

    const auto r = ingest::load_events(f.path);
    CHECK(r.report.records_ok == 9);
    REQUIRE(r.report.malformed_total == 1);
    REQUIRE(r.report.malformed.size() == 1);
    CHECK(r.report.malformed[0].line_no == 6);
    std::size_t total = 0;
    for (const auto& a : r.accounts) total += a.events.size();
    CHECK(total == 9);
}

TEST_CASE("malformed variants") {
    TempFile f("variants.jsonl", std::string("not json at all\n") +
                                     "{\"account_id\":\"a\",\"timestamp\":-5,\"action\":\"post\","
                                     "\"text_terms\":0,\"links\":0,\"hashtags\":0,\"media\":0,"
                                     "\"mentions\":0}\n" +
                                     "{\"account_id\":\"a\",\"timestamp\":5,\"action\":\"quote\","
                                     "\"text_terms\":0,\"links\":0,\"hashtags\":0,\"media\":0,"
                                     "\"mentions\":0}\n" +
                                     "{\"account_id\":\"a\",\"timestamp\":5,\"action\":\"post\","
                                     "\"text_terms\":-1,\"links\":0,\"hashtags\":0,\"media\":0,"
                                     "\"mentions\":0}\n" +
                                     "\n" + event_line("a", 10, "post"));
    const auto r = ingest::load_events(f.path);
    CHECK(r.report.malformed_total == 4);
    CHECK(r.report.blank_lines == 1);
    CHECK(r.report.records_ok == 1);
}

TEST_CASE("unreadable file is fatal") {
    CHECK_THROWS_AS((void)ingest::load_events("/nonexistent/nope.jsonl"), std::runtime_error);
}

TEST_CASE("iso-8601 timestamps normalize to epoch seconds") {
    CHECK(ingest::parse_iso8601("1970-01-01T00:00:00Z") == 0);
    CHECK(ingest::parse_iso8601("2021-01-04T00:00:00Z") == 18631LL * 86400);
    CHECK(ingest::parse_iso8601("2021-01-04 01:02:03") == 18631LL * 86400 + 3723);
    CHECK(ingest::parse_iso8601("2021-01-04T01:02:03.500Z") == 18631LL * 86400 + 3723);
    CHECK(ingest::parse_iso8601("2021-01-04T02:00:00+02:00") == 18631LL * 86400);
    CHECK(ingest::parse_iso8601("2021-01-04") == 18631LL * 86400);
    CHECK_FALSE(ingest::parse_iso8601("last tuesday").has_value());
    CHECK_FALSE(ingest::parse_iso8601("2021-13-04T00:00:00Z").has_value());

    TempFile f("iso.jsonl",
               "{\"account_id\":\"a\",\"timestamp\":\"2021-01-04T00:00:01Z\",\"action\":\"post\","
               "\"text_terms\":1,\"links\":0,\"hashtags\":0,\"media\":0,\"mentions\":0}\n");
    const auto r = ingest::load_events(f.path);
    REQUIRE(r.report.records_ok == 1);
    CHECK(r.accounts[0].events[0].timestamp == 18631LL * 86400 + 1);
}

TEST_CASE("timestamp ties keep input order") {
    TempFile f("ties.jsonl", event_line("a", 100, "post", 1) + event_line("a", 100, "reply", 2) +
                                 event_line("a", 50, "reshare", 3));
    const auto r = ingest::load_events(f.path);
    REQUIRE(r.accounts[0].events.size() == 3);
    CHECK(r.accounts[0].events[0].action == ingest::Action::reshare);
    CHECK(r.accounts[0].events[1].content.mentions == 1);
    CHECK(r.accounts[0].events[2].content.mentions == 2);
}

TEST_CASE("eligibility boundaries") {
    ingest::AccountTimeline tl;
    tl.account_id = "x";
    for (int i = 0; i < 19; ++i) tl.events.push_back({1000 + i, ingest::Action::post, {}});

    auto rejected = ingest::apply_eligibility(tl, 20, 300);
    REQUIRE(std::holds_alternative<ingest::Rejection>(rejected));
    CHECK(std::get<ingest::Rejection>(rejected).n_events == 19);

    tl.events.push_back({2000, ingest::Action::post, {}});
    auto kept = ingest::apply_eligibility(tl, 20, 300);
    REQUIRE(std::holds_alternative<ingest::AccountTimeline>(kept));
    CHECK(std::get<ingest::AccountTimeline>(kept).events.size() == 20);

    for (int i = 0; i < 330; ++i) tl.events.push_back({3000 + i, ingest::Action::reply, {}});
    auto capped = ingest::apply_eligibility(std::move(tl), 20, 300);
    REQUIRE(std::holds_alternative<ingest::AccountTimeline>(capped));
    const auto& ct = std::get<ingest::AccountTimeline>(capped);
    CHECK(ct.events.size() == 300);
    // Most recent events kept.
    CHECK(ct.events.back().timestamp == 3329);
    CHECK(ct.events.front().timestamp == 3030);

    // Idempotent.
    auto again = ingest::apply_eligibility(ct, 20, 300);
    REQUIRE(std::holds_alternative<ingest::AccountTimeline>(again));
    CHECK(std::get<ingest::AccountTimeline>(again).events.size() == 300);
    CHECK(std::get<ingest::AccountTimeline>(again).events.front().timestamp == 3030);
}

TEST_CASE("label attachment") {
    TempFile ev("lab_ev.jsonl", event_line("a", 1, "post") + event_line("b", 2, "post"));
    TempFile lab("lab.csv",
                 "account_id,label,task,campaign\n"
                 "a,bot,automation,\n"
                 "b,negative,coordination,camp1\n"
                 "ghost,human,automation,\n");
    auto r = ingest::load_events(ev.path);
    const auto lr = ingest::attach_labels(r.accounts, lab.path);
    CHECK(lr.labels_total == 3);
    CHECK(lr.attached == 2);
    CHECK(lr.unmatched == 1);
    REQUIRE(r.accounts[0].label.has_value());
    CHECK(r.accounts[0].label->label == ingest::Label::positive);
    CHECK(r.accounts[0].label->task == ingest::Task::automation);
    REQUIRE(r.accounts[1].label.has_value());
    CHECK(r.accounts[1].label->campaign == "camp1");
}

TEST_CASE("grouping is lossless over a generated fixture") {
    std::string content;
    std::size_t lines = 0;
    for (int acc = 0; acc < 7; ++acc)
        for (int i = 0; i < 13; ++i) {
            content += event_line("acc" + std::to_string(acc), 1000 + i * 17 + acc, "post");
            ++lines;
        }
    TempFile f("lossless.jsonl", content);
    const auto r = ingest::load_events(f.path);
    CHECK(r.report.records_ok == lines);
    std::size_t total = 0;
    for (const auto& a : r.accounts) total += a.events.size();
    CHECK(total == lines);
    CHECK(r.accounts.size() == 7);
}

}  // TEST_SUITE

TEST_SUITE("windowing") {

namespace {

ingest::AccountTimeline make_account(const std::string& id, ingest::Label label,
                                     std::vector<std::int64_t> times,
                                     const std::string& campaign = "c") {
    ingest::AccountTimeline tl;
    tl.account_id = id;
    tl.label = ingest::AccountLabel{label, ingest::Task::coordination, campaign};
    for (auto t : times) tl.events.push_back({t, ingest::Action::post, {}});
    return tl;
}

}  // namespace

TEST_CASE("window closes at the end of the year of the target-th account") {
    // 12 positives appearing in successive fortnights of 2021.
    const std::int64_t base = bchange::cal::days_from_civil(2021, 1, 4) * 86400;
    std::vector<ingest::AccountTimeline> accounts;
    for (int i = 0; i < 12; ++i) {
        // Two per fortnight: accounts i in fortnight i/2.
        const std::int64_t t = base + (i / 2) * 14LL * 86400 + i * 3600;
        accounts.push_back(make_account("p" + std::to_string(i), ingest::Label::positive,
                                        {t, t + 60, t + 120}));
    }
    // One late positive event in 2022 that must be trimmed away.
    accounts.push_back(make_account(
        "p_late", ingest::Label::positive,
        {base + 20 * 86400, bchange::cal::days_from_civil(2022, 3, 1) * 86400}));
    for (int i = 0; i < 20; ++i)
        accounts.push_back(make_account("ctl" + std::to_string(i), ingest::Label::negative,
                                        {base + i * 86400LL}));

    const auto w = ingest::window_campaign(accounts, 14, 10, 1);
    CHECK_FALSE(w.warning);
    CHECK(w.window_end == bchange::cal::days_from_civil(2022, 1, 1) * 86400);
    CHECK(w.positives == 13);
    CHECK(w.controls == 13);
    CHECK(w.accounts.size() == 26);
    for (const auto& a : w.accounts)
        for (const auto& ev : a.events) {
            CHECK(ev.timestamp >= w.window_start);
            CHECK(ev.timestamp < w.window_end);
        }
}

TEST_CASE("zero positives yields empty result with warning") {
    std::vector<ingest::AccountTimeline> accounts;
    accounts.push_back(make_account("ctl", ingest::Label::negative, {1000}));
    const auto w = ingest::window_campaign(accounts, 14, 10, 1);
    CHECK(w.warning);
    CHECK(w.accounts.empty());
}

TEST_CASE("fewer positives than target returns all with warning") {
    const std::int64_t base = bchange::cal::days_from_civil(2021, 3, 1) * 86400;
    std::vector<ingest::AccountTimeline> accounts;
    for (int i = 0; i < 4; ++i)
        accounts.push_back(
            make_account("p" + std::to_string(i), ingest::Label::positive, {base + i * 86400LL}));
    for (int i = 0; i < 9; ++i)
        accounts.push_back(make_account("c" + std::to_string(i), ingest::Label::negative,
                                        {base + i * 86400LL}));
    const auto w = ingest::window_campaign(accounts, 14, 10, 7);
    CHECK(w.warning);
    CHECK(w.positives == 4);
    CHECK(w.controls == 4);
}

TEST_CASE("equal-count control sampling and determinism") {
    const std::int64_t base = bchange::cal::days_from_civil(2021, 5, 3) * 86400;
    std::vector<ingest::AccountTimeline> accounts;
    for (int i = 0; i < 10; ++i)
        accounts.push_back(make_account("p" + std::to_string(i), ingest::Label::positive,
                                        {base + i * 3600LL}));
    for (int i = 0; i < 25; ++i)
        accounts.push_back(make_account("c" + std::to_string(i), ingest::Label::negative,
                                        {base + i * 7200LL}));

    const auto w1 = ingest::window_campaign(accounts, 14, 10, 42);
    CHECK(w1.positives == 10);
    CHECK(w1.controls == 10);

    const auto w2 = ingest::window_campaign(accounts, 14, 10, 42);
    REQUIRE(w1.accounts.size() == w2.accounts.size());
    for (std::size_t i = 0; i < w1.accounts.size(); ++i)
        CHECK(w1.accounts[i].account_id == w2.accounts[i].account_id);

    const auto w3 = ingest::window_campaign(accounts, 14, 10, 43);
    bool same = true;
    for (std::size_t i = 0; i < w1.accounts.size(); ++i)
        same = same && w1.accounts[i].account_id == w3.accounts[i].account_id;
    CHECK_FALSE(same);  // different seed picks different controls
}

}  // TEST_SUITE
