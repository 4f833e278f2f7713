#include <doctest.h>

#include <cmath>
#include <random>

#include "robomem/error.hpp"
#include "robomem/recall.hpp"
#include "test_support.hpp"

using namespace robomem;
using robomem::testing::resources;

namespace {

Observation explicit_obs(PropertyKey key, Value v) {
    return {std::move(key), std::move(v), Channel::explicit_answer};
}

Observation side_obs(PropertyKey key, Value v) {
    return {std::move(key), std::move(v), Channel::side_channel};
}

UserModel empty_model(RobotId robot, std::string user = "u1") {
    UserModel m;
    m.user_id = std::move(user);
    m.robot = robot;
    return m;
}

// A model holding one record for each non-emotion family plus an emotion record.
UserModel full_model(RobotId robot, const std::string& user, Valence mood) {
    const auto& persona = resources().personas.get(robot);
    std::vector<Observation> obs{
        explicit_obs(PropertyKey::username(), std::string("Ann")),
        explicit_obs(PropertyKey::personal("profession"), std::string("architect")),
        explicit_obs(PropertyKey::topic(), std::string("cinema")),
        explicit_obs(PropertyKey::interest("cinema"), InterestLevel::high),
        explicit_obs(PropertyKey::favourite("director"), std::string("denis villeneuve")),
        explicit_obs(PropertyKey::favourite("genre"), std::string("science fiction")),
        side_obs(PropertyKey::attire("color"), std::string("red")),
        side_obs(PropertyKey::emotion(), mood),
    };
    return populate(empty_model(robot, user), persona, obs, 1);
}

}  // namespace

TEST_SUITE("recall_engine") {

TEST_CASE("populate example: SunnyBot shared genre") {
    const auto& sunny = resources().personas.get(RobotId::SunnyBot);
    std::vector<Observation> obs{
        explicit_obs(PropertyKey::favourite("genre"), std::string("Science Fiction"))};
    UserModel m = populate(empty_model(RobotId::SunnyBot), sunny, obs, 1);
    REQUIRE(m.records.size() == 1);
    const MemoryRecord& r = m.records.at(PropertyKey::shared_favourite("genre"));
    CHECK(std::get<std::string>(r.value) == "science fiction");
    CHECK(r.probability == 0.9);
    CHECK(r.status == RecordStatus::stored);
}

TEST_CASE("populate example: RoboTech director and session-2 threshold recall") {
    const auto& robo = resources().personas.get(RobotId::RoboTech);
    std::vector<Observation> obs{
        explicit_obs(PropertyKey::favourite("director"), std::string("Christopher Nolan"))};
    UserModel m = populate(empty_model(RobotId::RoboTech), robo, obs, 1);
    REQUIRE(m.records.contains(PropertyKey::favourite("director")));
    CHECK(m.records.at(PropertyKey::favourite("director")).probability == 0.9);

    RecallResult res = recall(m, RecallConfig{}, 2);
    CHECK(res.outcome.remembered.contains(PropertyKey::favourite("director")));
    CHECK(res.model.records.at(PropertyKey::favourite("director")).status ==
          RecordStatus::remembered);
}

TEST_CASE("populate example: MindStorm neutral emotion is stored negative") {
    const auto& mind = resources().personas.get(RobotId::MindStorm);
    std::vector<Observation> obs{side_obs(PropertyKey::emotion(), Valence::neutral)};
    UserModel m = populate(empty_model(RobotId::MindStorm), mind, obs, 1);
    const MemoryRecord& r = m.records.at(PropertyKey::emotion());
    CHECK(std::get<Valence>(r.value) == Valence::negative);
    CHECK(r.probability == 1.0);
}

TEST_CASE("threshold recall example: MindStorm topic is forgotten") {
    const auto& mind = resources().personas.get(RobotId::MindStorm);
    std::vector<Observation> obs{explicit_obs(PropertyKey::topic(), std::string("cinema"))};
    UserModel m = populate(empty_model(RobotId::MindStorm), mind, obs, 1);
    RecallResult res = recall(m, RecallConfig{}, 2);
    CHECK(res.outcome.forgotten == std::set<PropertyKey>{PropertyKey::topic()});
    CHECK(res.outcome.remembered.empty());
}

TEST_CASE("observation validation") {
    const auto& robo = resources().personas.get(RobotId::RoboTech);
    auto code_of = [&](Observation o) {
        try {
            populate(empty_model(RobotId::RoboTech), robo, std::vector<Observation>{o}, 1);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::format;
    };
    CHECK(code_of(explicit_obs(PropertyKey::username(), std::string("  "))) ==
          ErrorCode::empty_value);
    CHECK(code_of(explicit_obs(PropertyKey::emotion(), Valence::positive)) ==
          ErrorCode::invalid_observation);
    CHECK(code_of(side_obs(PropertyKey::username(), std::string("ann"))) ==
          ErrorCode::invalid_observation);
    CHECK(code_of(explicit_obs(PropertyKey::interest("cinema"), std::string("lots"))) ==
          ErrorCode::invalid_observation);

    // A bad observation anywhere in the batch leaves nothing applied.
    std::vector<Observation> mixed{explicit_obs(PropertyKey::topic(), std::string("cinema")),
                                   explicit_obs(PropertyKey::username(), std::string(""))};
    CHECK_THROWS_AS(populate(empty_model(RobotId::RoboTech), robo, mixed, 1), Error);
}

TEST_CASE("populate rejects a persona for a different robot") {
    const auto& robo = resources().personas.get(RobotId::RoboTech);
    CHECK_THROWS_AS(populate(empty_model(RobotId::SunnyBot), robo, std::vector<Observation>{}, 1),
                    Error);
}

TEST_CASE("recall rejects the first session") {
    try {
        recall(empty_model(RobotId::RoboTech), RecallConfig{}, 1);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_argument);
    }
}

TEST_CASE("favourite and shared favourite of one category stay exclusive") {
    const auto& sunny = resources().personas.get(RobotId::SunnyBot);
    std::mt19937 rng(5);
    const std::vector<std::string> genres{"science fiction", "drama", "crime"};
    for (int i = 0; i < 200; ++i) {
        std::vector<Observation> obs;
        for (int n = rng() % 5; n >= 0; --n) {
            obs.push_back(explicit_obs(PropertyKey::favourite("genre"), genres[rng() % 3]));
        }
        UserModel m = populate(empty_model(RobotId::SunnyBot), sunny, obs, 1);
        const bool plain = m.records.contains(PropertyKey::favourite("genre"));
        const bool shared = m.records.contains(PropertyKey::shared_favourite("genre"));
        CHECK(plain != shared);
        // Last observation wins.
        const std::string& last = std::get<std::string>(obs.back().raw_value);
        CHECK((shared == (last == "science fiction")));

        // Reacquiring later also keeps them exclusive.
        m = reacquire(m, sunny, explicit_obs(PropertyKey::favourite("genre"), genres[rng() % 3]),
                      2);
        CHECK(m.records.contains(PropertyKey::favourite("genre")) !=
              m.records.contains(PropertyKey::shared_favourite("genre")));
    }
}

TEST_CASE("populate partitions keys and records get table probabilities") {
    std::mt19937 rng(9);
    for (RobotId robot : kAllRobots) {
        for (Valence v : kAllValences) {
            UserModel m = full_model(robot, "p", v);
            for (const auto& [key, rec] : m.records) {
                CHECK(rec.key == key);
                CHECK(rec.status == RecordStatus::stored);
                CHECK(rec.probability ==
                      get_probability(robot, key, rec.observed_valence));
            }
            RecallConfig cfg{RecallMode::threshold, 0.7, 0};
            RecallResult res = recall(m, cfg, 2);
            std::set<PropertyKey> all;
            for (const auto& [k, _] : m.records) all.insert(k);
            std::set<PropertyKey> joined = res.outcome.remembered;
            joined.insert(res.outcome.forgotten.begin(), res.outcome.forgotten.end());
            CHECK(joined == all);
            for (const auto& k : res.outcome.remembered) CHECK(!res.outcome.forgotten.contains(k));
        }
    }
}

TEST_CASE("threshold monotonicity") {
    for (RobotId robot : kAllRobots) {
        UserModel m = full_model(robot, "mono", Valence::negative);
        std::set<PropertyKey> previous;
        bool first = true;
        for (int t = 100; t >= 0; t -= 5) {
            RecallConfig cfg{RecallMode::threshold, t / 100.0, 0};
            auto remembered = recall(m, cfg, 2).outcome.remembered;
            if (!first) {
                for (const auto& k : previous) CHECK(remembered.contains(k));
            }
            previous = remembered;
            first = false;
        }
    }
}

TEST_CASE("threshold statuses track the configured threshold each session") {
    UserModel m = full_model(RobotId::SunnyBot, "t", Valence::positive);
    auto r1 = recall(m, RecallConfig{RecallMode::threshold, 0.95, 0}, 2);
    auto r2 = recall(r1.model, RecallConfig{RecallMode::threshold, 0.5, 0}, 3);
    CHECK(r2.outcome.remembered.size() >= r1.outcome.remembered.size());
    CHECK(r2.outcome.remembered.contains(PropertyKey::username()));
    CHECK_FALSE(r1.outcome.remembered.contains(PropertyKey::username()));
}

TEST_CASE("stochastic recall is deterministic and sticky") {
    UserModel m = full_model(RobotId::MindStorm, "sticky", Valence::positive);
    RecallConfig cfg{RecallMode::stochastic, 0.7, 1234};
    auto a = recall(m, cfg, 2);
    auto b = recall(m, cfg, 2);
    CHECK(a.outcome == b.outcome);
    CHECK(a.model == b.model);

    // A later session leaves already-sampled statuses untouched, even with a
    // different seed.
    RecallConfig other{RecallMode::stochastic, 0.7, 99};
    auto c = recall(a.model, other, 3);
    CHECK(c.outcome.remembered == a.outcome.remembered);
    CHECK(c.outcome.forgotten == a.outcome.forgotten);
    CHECK(c.outcome.session_index == 3);

    // Reacquiring resets the record to `stored`, so it is sampled again.
    const auto& persona = resources().personas.get(RobotId::MindStorm);
    UserModel re = reacquire(a.model, persona,
                             explicit_obs(PropertyKey::topic(), std::string("music")), 2);
    CHECK(re.records.at(PropertyKey::topic()).status == RecordStatus::stored);
    CHECK(std::get<std::string>(re.records.at(PropertyKey::topic()).value) == "music");
}

TEST_CASE("stochastic extremes are exact") {
    // p == 1 is always remembered, p == 0 is never remembered.
    UserModel m = empty_model(RobotId::RoboTech, "extreme");
    MemoryRecord one = make_record(RobotId::RoboTech, PropertyKey::topic(), std::string("x"), 1);
    MemoryRecord zero = one;
    zero.key = PropertyKey::personal("zero");
    zero.probability = 0.0;
    m.records.emplace(one.key, one);
    m.records.emplace(zero.key, zero);
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        auto res = recall(m, RecallConfig{RecallMode::stochastic, 0.7, seed}, 2);
        CHECK(res.outcome.remembered.contains(PropertyKey::topic()));
        CHECK(res.outcome.forgotten.contains(PropertyKey::personal("zero")));
    }
}

TEST_CASE("stochastic frequency for p = 0.4 over fresh users") {
    // SunnyBot personal details carry p = 0.4. With n = 10000 Bernoulli draws
    // the standard deviation is sqrt(0.4 * 0.6 / n) ~= 0.0049; +-0.02 is over
    // four standard deviations.
    const auto& sunny = resources().personas.get(RobotId::SunnyBot);
    const int n = 10000;
    const double p = 0.4;
    const double sigma = std::sqrt(p * (1 - p) / n);
    REQUIRE(4 * sigma < 0.02);
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        UserModel m = populate(
            empty_model(RobotId::SunnyBot, "mc-" + std::to_string(i)), sunny,
            std::vector<Observation>{
                explicit_obs(PropertyKey::personal("profession"), std::string("architect"))},
            1);
        auto res = recall(m, RecallConfig{RecallMode::stochastic, 0.7, 42}, 2);
        hits += res.outcome.remembered.contains(PropertyKey::personal("profession"));
    }
    const double freq = static_cast<double>(hits) / n;
    CHECK(freq >= 0.38);
    CHECK(freq <= 0.42);
}

TEST_CASE("recall_draw is uniform in [0,1) and key-sensitive") {
    double sum = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        double u = recall_draw(7, "user-" + std::to_string(i), RobotId::RoboTech,
                               PropertyKey::username());
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    // Mean of n uniforms has sd 1/sqrt(12 n) ~= 0.002.
    CHECK(std::abs(sum / n - 0.5) < 0.01);
    CHECK(recall_draw(1, "a", RobotId::RoboTech, PropertyKey::username()) !=
          recall_draw(2, "a", RobotId::RoboTech, PropertyKey::username()));
    CHECK(recall_draw(1, "a", RobotId::RoboTech, PropertyKey::username()) !=
          recall_draw(1, "a", RobotId::SunnyBot, PropertyKey::username()));
    CHECK(recall_draw(1, "a", RobotId::RoboTech, PropertyKey::username()) ==
          recall_draw(1, "a", RobotId::RoboTech, PropertyKey::username()));
}

}
