#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lab/cli.hpp"

#include <cstdio>
#include <fstream>

using namespace lab;

TEST_CASE("csv rendering quotes exactly the fields that need it") {
    ExperimentReport rep;
    rep.columns = {"a", "b"};
    rep.rows.push_back({"plain", "with,comma"});
    rep.rows.push_back({"quote\"inside", "line\nbreak"});
    rep.note("key", "value");
    std::string csv = report_csv(rep);
    CHECK(csv ==
          "a,b\n"
          "plain,\"with,comma\"\n"
          "\"quote\"\"inside\",\"line\nbreak\"\n"
          "summary,key,value\n");
}

TEST_CASE("json rendering carries rows and summary") {
    ExperimentReport rep;
    rep.columns = {"x"};
    rep.rows.push_back({"1"});
    rep.check("ok", true);
    std::string js = report_json(rep);
    CHECK(js.find("\"columns\"") != std::string::npos);
    CHECK(js.find("\"ok\": \"pass\"") != std::string::npos);
    CHECK(js.back() == '\n');
}

TEST_CASE("config files: comments, blanks, padding, overrides") {
    std::string path = "test_cli_config.tmp";
    {
        std::ofstream out(path);
        out << "# leading comment\n\n"
            << "  k = 3  \n"
            << "radii=4,3,2 # trailing comment\n";
    }
    auto kv = parse_config_file(path);
    std::remove(path.c_str());
    CHECK(kv.at("k") == "3");
    CHECK(kv.at("radii") == "4,3,2");
    CHECK(kv.size() == 2);

    CliConfig cfg;
    cfg.kv = kv;
    CHECK(cfg.get_ll("k", 0) == 3);
    CHECK(cfg.get_ll("missing", 7) == 7);
    CHECK(cfg.get_rat("missing_rat", Rat(1, 2)) == Rat(1, 2));
}

TEST_CASE("balls report: zd sizes and exact checks") {
    CliConfig cfg;
    cfg.group = GroupKind::Zd;
    cfg.kv["n_max"] = "6";
    ExperimentReport rep = cmd_balls(cfg);
    CHECK(rep.exit_code == 0);
    REQUIRE(rep.rows.size() == 7);
    CHECK(rep.rows[0][1] == "1");
    CHECK(rep.rows[3][1] == "25");
    CHECK(rep.rows[6][1] == "85");
}

TEST_CASE("avgseq report rows are the frozen sequence") {
    CliConfig cfg;
    ExperimentReport rep = cmd_avgseq(cfg);
    CHECK(rep.exit_code == 0);
    const char* expected[] = {"1", "6", "9", "108", "135", "162", "189", "4536"};
    REQUIRE(rep.rows.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(rep.rows[i][2] == expected[i]);
        CHECK(rep.rows[i].back() == "pass");
    }
}

TEST_CASE("mset requires the heisenberg group") {
    CliConfig cfg;
    cfg.group = GroupKind::Zd;
    CHECK_THROWS_AS(cmd_mset(cfg), KindError);
}

TEST_CASE("incremental exhaustion reports unknown with exit code 2") {
    CliConfig cfg;
    cfg.group = GroupKind::Zd;
    cfg.kv["dim"] = "1";
    cfg.kv["radii"] = "2,2,2";
    cfg.kv["k"] = "3";
    ExperimentReport rep = cmd_incremental(cfg);
    CHECK(rep.exit_code == 2);
    bool unknown = false;
    for (const auto& [k, v] : rep.summary)
        if (k == "status" && v == "unknown") unknown = true;
    CHECK(unknown);
}

TEST_CASE("reports are deterministic for a fixed seed") {
    for (ExperimentReport (*fn)(const CliConfig&) : {cmd_hopf, cmd_maximal}) {
        CliConfig cfg;
        cfg.seed = 99;
        std::string a = report_csv(fn(cfg));
        std::string b = report_csv(fn(cfg));
        CHECK(a == b);
        cfg.seed = 100;
        CHECK(report_csv(fn(cfg)) != a); // the seed actually feeds the sampling
    }
}

TEST_CASE("hopf and maximal exact checks pass on seeded samples") {
    CliConfig cfg;
    cfg.seed = 4;
    ExperimentReport h = cmd_hopf(cfg);
    CHECK(h.exit_code == 0);
    ExperimentReport m = cmd_maximal(cfg);
    CHECK(m.exit_code == 0);
}
