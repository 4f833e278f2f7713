#include <doctest.h>

#include <random>

#include "robomem/error.hpp"
#include "robomem/memory_model.hpp"
#include "test_support.hpp"

using namespace robomem;
using robomem::testing::resources;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::format;
}

}  // namespace

TEST_SUITE("memory_model") {

TEST_CASE("probability lookup examples") {
    CHECK(get_probability(RobotId::MindStorm, PropertyKey::topic()) == 0.5);
    CHECK(get_probability(RobotId::SunnyBot, PropertyKey::emotion(), Valence::neutral) == 1.0);
    CHECK(get_probability(RobotId::RoboTech, PropertyKey::personal("profession")) == 0.9);
    CHECK(get_probability(RobotId::MindStorm, PropertyKey::favourite("film")) == 0.2);
    CHECK(get_probability(RobotId::SunnyBot, PropertyKey::emotion(), Valence::negative) == 0.5);
}

TEST_CASE("valence presence is checked") {
    CHECK(code_of([] { get_probability(RobotId::SunnyBot, PropertyKey::emotion()); }) ==
          ErrorCode::missing_valence);
    CHECK(code_of([] {
              get_probability(RobotId::SunnyBot, PropertyKey::username(), Valence::positive);
          }) == ErrorCode::spurious_valence);
}

TEST_CASE("parameterized families share one probability") {
    std::mt19937 rng(11);
    const char* params[] = {"profession", "age", "film", "actor", "author", "color", "style",
                            "city of birth"};
    for (RobotId r : kAllRobots) {
        for (Family f : {Family::Personal, Family::Interest, Family::Favourite,
                         Family::SharedFavourite, Family::Attire}) {
            const double base = get_probability(r, PropertyKey::make(f, "x"));
            for (const char* p : params) CHECK(get_probability(r, PropertyKey::make(f, p)) == base);
        }
    }
}

TEST_CASE("perceive_valence") {
    CHECK(perceive_valence(RobotId::SunnyBot, Valence::neutral) == Valence::positive);
    CHECK(perceive_valence(RobotId::MindStorm, Valence::neutral) == Valence::negative);
    CHECK(perceive_valence(RobotId::RoboTech, Valence::neutral) == Valence::neutral);
    CHECK(perceive_valence(RobotId::MindStorm, Valence::positive) == Valence::positive);
    for (RobotId r : kAllRobots) {
        for (Valence v : kAllValences) {
            if (v != Valence::neutral) CHECK(perceive_valence(r, v) == v);
        }
    }
}

TEST_CASE("classify_favourite examples") {
    const auto& reg = resources().personas;
    CHECK(classify_favourite(reg.get(RobotId::SunnyBot), "genre", "science fiction") ==
          PropertyKey::shared_favourite("genre"));
    CHECK(classify_favourite(reg.get(RobotId::RoboTech), "director", "christopher nolan") ==
          PropertyKey::favourite("director"));
    CHECK(classify_favourite(reg.get(RobotId::SunnyBot), "actor", "leonardo dicaprio") ==
          PropertyKey::shared_favourite("actor"));
    CHECK(classify_favourite(reg.get(RobotId::SunnyBot), "actor", "amy adams") ==
          PropertyKey::favourite("actor"));
}

TEST_CASE("classify_favourite is membership, exhaustively over small preference sets") {
    const std::vector<Preference> universe{
        {"film", "tenet"}, {"film", "interstellar"}, {"actor", "amy adams"}, {"genre", "drama"}};
    for (unsigned mask = 0; mask < (1u << universe.size()); ++mask) {
        PersonaProfile p;
        for (std::size_t i = 0; i < universe.size(); ++i) {
            if (mask & (1u << i)) p.preferences.insert(universe[i]);
        }
        for (const auto& [category, value] : universe) {
            const bool shared = p.preferences.contains({category, value});
            const PropertyKey k = classify_favourite(p, category, value);
            CHECK(k.family() == (shared ? Family::SharedFavourite : Family::Favourite));
            CHECK(*k.param() == category);
        }
    }
}

TEST_CASE("normalize_value") {
    CHECK(normalize_value("  Christopher  NOLAN ") == "christopher nolan");
    CHECK(normalize_value("Tenet") == "tenet");
    CHECK(normalize_value("a\t\nb") == "a b");
    CHECK(code_of([] { normalize_value("   "); }) == ErrorCode::empty_value);
    CHECK(code_of([] { normalize_value(""); }) == ErrorCode::empty_value);

    std::mt19937 rng(3);
    const std::string alphabet = "aBc Z\t x";
    for (int i = 0; i < 300; ++i) {
        std::string s;
        for (int n = rng() % 12; n >= 0; --n) s.push_back(alphabet[rng() % alphabet.size()]);
        try {
            std::string once = normalize_value(s);
            CHECK(normalize_value(once) == once);
            CHECK(once.front() != ' ');
            CHECK(once.back() != ' ');
            CHECK(once.find("  ") == std::string::npos);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::empty_value);
        }
    }
}

TEST_CASE("property keys enforce arity and normalize params") {
    CHECK(PropertyKey::personal("  Profession ").param() == std::optional<std::string>("profession"));
    CHECK(PropertyKey::username().to_string() == "username");
    CHECK(PropertyKey::favourite("film").to_string() == "favourite(film)");
    CHECK(code_of([] { PropertyKey::make(Family::Username, "x"); }) ==
          ErrorCode::invalid_observation);
    CHECK(code_of([] { PropertyKey::make(Family::Personal); }) == ErrorCode::invalid_observation);
    for (Family f : kAllFamilies) CHECK(parse_family(to_string(f)) == f);
}

TEST_CASE("values must match the family") {
    CHECK_NOTHROW(check_value_matches(PropertyKey::interest("cinema"), InterestLevel::high));
    CHECK_THROWS(check_value_matches(PropertyKey::interest("cinema"), std::string("high")));
    CHECK_THROWS(check_value_matches(PropertyKey::emotion(), std::string("sad")));
    CHECK_THROWS(check_value_matches(PropertyKey::username(), Valence::positive));
}

TEST_CASE("make_record applies the perception transform and keys emotion on observation") {
    MemoryRecord r = make_record(RobotId::SunnyBot, PropertyKey::emotion(), Valence::neutral, 1);
    CHECK(std::get<Valence>(r.value) == Valence::positive);
    CHECK(r.observed_valence == Valence::neutral);
    CHECK(r.probability == 1.0);
    CHECK(r.status == RecordStatus::stored);

    MemoryRecord m = make_record(RobotId::MindStorm, PropertyKey::emotion(), Valence::neutral, 3);
    CHECK(std::get<Valence>(m.value) == Valence::negative);
    CHECK(m.probability == 1.0);
    CHECK(m.session_observed == 3);

    MemoryRecord u = make_record(RobotId::SunnyBot, PropertyKey::username(), std::string("ann"), 1);
    CHECK_FALSE(u.observed_valence.has_value());
    CHECK(u.probability == 0.8);
}

TEST_CASE("dominance and personality effects") {
    for (Family f : kAllFamilies) {
        if (f == Family::Emotion || f == Family::Attire) continue;
        const PropertyKey k = family_takes_param(f) ? PropertyKey::make(f, "x") : PropertyKey::make(f);
        CHECK(get_probability(RobotId::RoboTech, k) >= get_probability(RobotId::SunnyBot, k));
        CHECK(get_probability(RobotId::SunnyBot, k) >= get_probability(RobotId::MindStorm, k));
    }
    CHECK(get_probability(RobotId::SunnyBot, PropertyKey::shared_favourite("x")) >
          get_probability(RobotId::SunnyBot, PropertyKey::favourite("x")));
    CHECK(get_probability(RobotId::MindStorm, PropertyKey::emotion(), Valence::negative) == 1.0);
    CHECK(get_probability(RobotId::MindStorm, PropertyKey::emotion(), Valence::positive) == 0.2);
}

}
