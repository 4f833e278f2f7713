#include <doctest.h>

#include <fstream>
#include <random>

#include "robomem/error.hpp"
#include "robomem/store.hpp"
#include "test_support.hpp"

using namespace robomem;
using robomem::testing::resources;
using robomem::testing::TempDir;

namespace {

UserModel sample_model(RobotId robot, const std::string& user, std::mt19937& rng) {
    const auto& persona = resources().personas.get(robot);
    UserModel m;
    m.user_id = user;
    m.robot = robot;
    std::vector<Observation> obs{
        {PropertyKey::username(), std::string("Ann Smith"), Channel::explicit_answer},
        {PropertyKey::personal("profession"), std::string("nurse"), Channel::explicit_answer},
        {PropertyKey::interest("cinema"), InterestLevel::medium, Channel::explicit_answer},
        {PropertyKey::favourite("actor"), std::string("leonardo dicaprio"),
         Channel::explicit_answer},
        {PropertyKey::emotion(), kAllValences[rng() % 3], Channel::side_channel},
        {PropertyKey::attire("color"), std::string("green"), Channel::side_channel},
    };
    m = populate(m, persona, obs, 1);
    RecallConfig cfg{rng() % 2 ? RecallMode::stochastic : RecallMode::threshold, 0.7, rng()};
    return recall(m, cfg, 2).model;
}

ErrorCode load_code(const nlohmann::json& doc) {
    try {
        model_from_json(doc);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::format;
}

}  // namespace

TEST_SUITE("store") {

TEST_CASE("model json round trip") {
    std::mt19937 rng(21);
    for (int i = 0; i < 60; ++i) {
        UserModel m = sample_model(kAllRobots[i % 3], "user" + std::to_string(i), rng);
        CHECK(model_from_json(model_to_json(m)) == m);
        CHECK(model_from_json(nlohmann::json::parse(model_to_json(m).dump())) == m);
    }
}

TEST_CASE("save and load through the filesystem") {
    TempDir dir;
    std::mt19937 rng(4);
    UserModel m = sample_model(RobotId::SunnyBot, "ann", rng);
    save(m, dir.path());
    CHECK(std::filesystem::exists(model_path(dir.path(), "ann", RobotId::SunnyBot)));
    CHECK(load(dir.path(), "ann", RobotId::SunnyBot) == m);

    // Models are per robot.
    UserModel other = load(dir.path(), "ann", RobotId::MindStorm);
    CHECK(other.records.empty());
    CHECK(other.robot == RobotId::MindStorm);
    CHECK(other.user_id == "ann");
}

TEST_CASE("corrupted documents are rejected") {
    std::mt19937 rng(8);
    UserModel m = sample_model(RobotId::RoboTech, "c", rng);
    const nlohmann::json good = model_to_json(m);
    REQUIRE(good["records"].size() >= 1);

    auto bad = good;
    bad["schema_version"] = 2;
    CHECK(load_code(bad) == ErrorCode::corruption);

    bad = good;
    bad["records"][0]["probability"] = 0.55;
    CHECK(load_code(bad) == ErrorCode::corruption);

    bad = good;
    bad["records"][0]["probability"] = 1.5;
    CHECK(load_code(bad) == ErrorCode::corruption);

    bad = good;
    bad["records"][0]["family"] = "hobby";
    CHECK(load_code(bad) == ErrorCode::corruption);

    bad = good;
    bad["records"].push_back(good["records"][0]);
    CHECK(load_code(bad) == ErrorCode::corruption);

    bad = good;
    bad["robot"] = "Nao";
    CHECK(load_code(bad) == ErrorCode::corruption);

    bad = good;
    bad.erase("records");
    CHECK(load_code(bad) == ErrorCode::corruption);

    TempDir dir;
    auto path = model_path(dir.path(), "c", RobotId::RoboTech);
    std::filesystem::create_directories(path.parent_path());
    std::ofstream(path) << "{not json";
    try {
        load(dir.path(), "c", RobotId::RoboTech);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::corruption);
    }
}

TEST_CASE("user ids must be safe path components") {
    CHECK_NOTHROW(check_user_id("u-0123abcd"));
    CHECK_NOTHROW(check_user_id("ann.smith_2"));
    for (const char* bad : {"", "..", ".hidden", "a/b", "a\\b", "a b"}) {
        CHECK_THROWS_AS(check_user_id(bad), Error);
    }
}

TEST_CASE("transcript entries round trip and require replay context") {
    TempDir dir;
    TranscriptEntry e;
    e.session_id = "s1";
    e.turn = 3;
    e.speaker = "robot";
    e.text = "Hello";
    e.acts = nlohmann::json::array({{{"kind", "Farewell"}, {"slots", nlohmann::json::object()}}});
    e.side_channel = nullptr;
    e.user_id = "ann";
    e.robot = RobotId::MindStorm;
    e.session_index = 2;
    e.config = RecallConfig{RecallMode::stochastic, 0.6, 77};
    CHECK(transcript_entry_from_json(transcript_entry_to_json(e)) == e);

    auto path = transcript_path(dir.path(), "ann", RobotId::MindStorm);
    append_transcript(path, e);
    e.turn = 4;
    append_transcript(path, e);
    auto back = read_transcript(path);
    REQUIRE(back.size() == 2);
    CHECK(back[1] == e);

    auto j = transcript_entry_to_json(e);
    j.erase("seed");
    try {
        transcript_entry_from_json(j);
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::format);
    }
}

TEST_CASE("completed sessions count farewells") {
    TempDir dir;
    ModelStore store(dir.path());
    CHECK(store.completed_sessions("ann", RobotId::SunnyBot) == 0);
    TranscriptEntry e;
    e.user_id = "ann";
    e.robot = RobotId::SunnyBot;
    e.speaker = "robot";
    e.session_id = "a";
    e.acts = nlohmann::json::array({{{"kind", "Farewell"}, {"slots", nlohmann::json::object()}}});
    store.append_transcript(e);
    store.append_transcript(e);
    e.session_id = "b";
    e.acts = nlohmann::json::array();
    store.append_transcript(e);
    CHECK(store.completed_sessions("ann", RobotId::SunnyBot) == 1);
    CHECK(store.completed_sessions("ann", RobotId::RoboTech) == 0);
}

}
