#include <doctest.h>

#include <cmath>
#include <fstream>

#include "robomem/error.hpp"
#include "robomem/sim.hpp"
#include "test_support.hpp"

using namespace robomem;
using robomem::testing::resources;
using robomem::testing::TempDir;

namespace {

UserScript canonical() {
    return load_user_script(robomem::testing::data_dir() / "scripts" / "canonical_user.json");
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("simulation is deterministic for a fixed seed") {
    for (RecallMode mode : {RecallMode::threshold, RecallMode::stochastic}) {
        TempDir a, b;
        RecallConfig cfg{mode, 0.7, 2024};
        auto r1 = simulate(resources(), RobotId::SunnyBot, canonical(), 3, cfg, a.path());
        auto r2 = simulate(resources(), RobotId::SunnyBot, canonical(), 3, cfg, b.path());
        CHECK(r1.final_model == r2.final_model);
        REQUIRE(r1.transcript.size() == r2.transcript.size());
        for (std::size_t i = 0; i < r1.transcript.size(); ++i) {
            CHECK(r1.transcript[i].text == r2.transcript[i].text);
            CHECK(r1.transcript[i].acts == r2.transcript[i].acts);
        }
    }
}

TEST_CASE("replay reproduces a recorded transcript") {
    for (RobotId robot : kAllRobots) {
        TempDir dir;
        RecallConfig cfg{RecallMode::stochastic, 0.7, 5};
        simulate(resources(), robot, canonical(), 3, cfg, dir.path());
        auto path = transcript_path(dir.path(), "benedetta", robot);
        ReplayReport report = replay(resources(), path);
        CHECK(report.identical);
        CHECK(report.sessions_checked == 3);
        CHECK(report.turns_checked > 0);
        CHECK(report.summary() == "identical");
    }
}

TEST_CASE("replay reports the first divergence") {
    TempDir dir;
    simulate(resources(), RobotId::RoboTech, canonical(), 2, RecallConfig{}, dir.path());
    auto entries = read_transcript(transcript_path(dir.path(), "benedetta", RobotId::RoboTech));
    std::size_t target = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].speaker == "robot" && entries[i].session_index == 2) {
            target = i;
            break;
        }
    }
    REQUIRE(target > 0);
    entries[target].text = "tampered";
    ReplayReport report = replay(resources(), entries);
    CHECK_FALSE(report.identical);
    CHECK(report.session_id == entries[target].session_id);
    CHECK(report.turn == entries[target].turn);
    CHECK(report.expected == "tampered");
    CHECK(report.summary().find("divergence at session") == 0);
}

TEST_CASE("replay rejects logs without a seed") {
    TempDir dir;
    simulate(resources(), RobotId::RoboTech, canonical(), 1, RecallConfig{}, dir.path());
    auto path = transcript_path(dir.path(), "benedetta", RobotId::RoboTech);
    std::ifstream in(path);
    std::string line, rewritten;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        j.erase("seed");
        rewritten += j.dump() + "\n";
    }
    in.close();
    std::ofstream(path, std::ios::trunc) << rewritten;
    try {
        replay(resources(), path);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::format);
    }
}

TEST_CASE("stats cover every cell and match the table") {
    auto cells = run_stats(4000, 3);
    CHECK(cells.size() == 30);
    for (const auto& c : cells) {
        CHECK(c.trials == 4000);
        // sd <= 0.5 / sqrt(4000) ~= 0.0079; 0.04 is five standard deviations.
        CHECK(std::abs(c.observed - c.expected) <= 0.04);
        if (c.expected == 0.0 || c.expected == 1.0) CHECK(c.observed == c.expected);
    }
    const std::string csv = stats_to_csv(cells);
    CHECK(csv.rfind("robot,family,valence,expected,observed,trials\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 31);
}

TEST_CASE("user script parsing") {
    auto s = canonical();
    CHECK(s.user_id == "benedetta");
    CHECK(s.session(1).side_for(RobotId::MindStorm).emotion_valence == Valence::negative);
    CHECK(s.session(1).side_for(RobotId::SunnyBot).emotion_valence == Valence::neutral);
    CHECK(&s.session(7) == &s.session(2));
    CHECK(s.answer_for(1, PropertyKey::shared_favourite("actor")) ==
          std::optional<std::string>("Leonardo DiCaprio"));
    CHECK_THROWS_AS(user_script_from_json(nlohmann::json{{"sessions", 3}}), Error);
}

}
