#include "robomem/sim.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "robomem/error.hpp"

namespace robomem {

using nlohmann::json;

const SideChannel& ScriptSession::side_for(RobotId robot) const {
    auto it = side_channel_by_robot.find(robot);
    return it == side_channel_by_robot.end() ? side_channel : it->second;
}

const ScriptSession& UserScript::session(int index) const {
    if (sessions.empty()) throw Error(ErrorCode::format, "user script has no sessions");
    std::size_t i = static_cast<std::size_t>(std::max(index, 1) - 1);
    return sessions[std::min(i, sessions.size() - 1)];
}

std::optional<std::string> UserScript::answer_for(int session_index, const PropertyKey& key) const {
    const auto& answers = session(session_index).answers;
    if (auto it = answers.find(key.to_string()); it != answers.end()) return it->second;
    if (key.family() == Family::SharedFavourite) {
        if (auto it = answers.find(PropertyKey::favourite(*key.param()).to_string());
            it != answers.end()) {
            return it->second;
        }
    }
    return std::nullopt;
}

UserScript user_script_from_json(const json& doc) {
    try {
        UserScript script;
        script.user_id = doc.at("user_id").get<std::string>();
        check_user_id(script.user_id);
        for (const auto& s : doc.at("sessions")) {
            ScriptSession session;
            session.answers = s.value("answers", json::object()).get<std::map<std::string, std::string>>();
            session.side_channel = side_channel_from_json(s.value("side_channel", json(nullptr)));
            const json by_robot = s.value("side_channel_by_robot", json::object());
            for (const auto& [robot, side] : by_robot.items()) {
                session.side_channel_by_robot[parse_robot(robot)] = side_channel_from_json(side);
            }
            session.small_talk = s.value("small_talk", session.small_talk);
            script.sessions.push_back(std::move(session));
        }
        if (script.sessions.empty()) throw Error(ErrorCode::format, "user script has no sessions");
        return script;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::format, std::string("malformed user script: ") + e.what());
    }
}

UserScript load_user_script(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open user script " + path.string());
    try {
        return user_script_from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::format, path.string() + ": " + e.what());
    }
}

SimulationResult simulate(const Resources& resources, RobotId robot, const UserScript& script,
                          int sessions, const RecallConfig& config,
                          const std::filesystem::path& store_root) {
    if (sessions < 1) throw Error(ErrorCode::invalid_argument, "sessions must be >= 1");
    ModelStore store(store_root);
    DialogueEngine engine(resources, store);
    const std::size_t log_start = store.transcript(script.user_id, robot).size();

    for (int s = 0; s < sessions; ++s) {
        const int index = store.completed_sessions(script.user_id, robot) + 1;
        const std::string sid =
            script.user_id + "-" + std::string(to_string(robot)) + "-" + std::to_string(index);
        Turn turn = engine.start_session(script.user_id, robot, config, sid);
        const ScriptSession& plan = script.session(index);

        bool first = true;
        for (int guard = 0; turn.state.phase != Phase::closed; ++guard) {
            if (guard > 200) throw Error(ErrorCode::format, "user script does not finish session " + sid);
            std::string text = plan.small_talk;
            if (!turn.state.pending.empty()) {
                const PropertyKey key = turn.state.pending.front().key();
                auto answer = script.answer_for(index, key);
                if (!answer) {
                    throw Error(ErrorCode::format, "user script has no answer for " + key.to_string());
                }
                text = *answer;
            }
            const SideChannel side = first ? plan.side_for(robot) : SideChannel{};
            first = false;
            turn = engine.step(std::move(turn.state), text, side);
        }
    }

    auto log = store.transcript(script.user_id, robot);
    SimulationResult result;
    result.transcript.assign(log.begin() + static_cast<std::ptrdiff_t>(log_start), log.end());
    result.final_model = store.load(script.user_id, robot);
    return result;
}

std::vector<StatsCell> run_stats(int trials, std::uint64_t seed) {
    if (trials < 1) throw Error(ErrorCode::invalid_argument, "trials must be >= 1");
    const RecallConfig config{RecallMode::stochastic, kDefaultRecallThreshold, seed};

    // One representative key per family; the parameter does not affect the
    // probability.
    auto key_for = [](Family f) {
        switch (f) {
            case Family::Personal: return PropertyKey::personal("profession");
            case Family::Interest: return PropertyKey::interest("cinema");
            case Family::Favourite: return PropertyKey::favourite("film");
            case Family::SharedFavourite: return PropertyKey::shared_favourite("actor");
            case Family::Attire: return PropertyKey::attire("color");
            default: return PropertyKey::make(f);
        }
    };
    auto value_for = [](Family f) -> Value {
        if (f == Family::Interest) return InterestLevel::high;
        return std::string("x");
    };

    std::vector<StatsCell> cells;
    for (RobotId robot : kAllRobots) {
        std::map<Family, int> hits;
        std::map<Valence, int> emotion_hits;
        for (int t = 0; t < trials; ++t) {
            UserModel model;
            model.user_id = "trial-" + std::to_string(t);
            model.robot = robot;
            for (Family f : kAllFamilies) {
                if (f == Family::Emotion) continue;
                PropertyKey k = key_for(f);
                model.records.insert_or_assign(k, make_record(robot, k, value_for(f), 1));
            }
            auto [after, outcome] = recall(std::move(model), config, 2);
            for (const auto& k : outcome.remembered) ++hits[k.family()];

            // A model holds a single emotion record, so each valence gets its
            // own fresh user.
            for (Valence v : kAllValences) {
                UserModel em;
                em.user_id = "trial-" + std::to_string(t) + "-" + std::string(to_string(v));
                em.robot = robot;
                em.records.insert_or_assign(PropertyKey::emotion(),
                                            make_record(robot, PropertyKey::emotion(), v, 1));
                auto [em_after, em_outcome] = recall(std::move(em), config, 2);
                if (!em_outcome.remembered.empty()) ++emotion_hits[v];
            }
        }
        for (Family f : kAllFamilies) {
            if (f == Family::Emotion) {
                for (Valence v : kAllValences) {
                    cells.push_back({robot, f, v, get_probability(robot, PropertyKey::emotion(), v),
                                     static_cast<double>(emotion_hits[v]) / trials, trials});
                }
            } else {
                cells.push_back({robot, f, std::nullopt, get_probability(robot, key_for(f)),
                                 static_cast<double>(hits[f]) / trials, trials});
            }
        }
    }
    return cells;
}

std::string stats_to_csv(const std::vector<StatsCell>& cells) {
    std::ostringstream out;
    out << "robot,family,valence,expected,observed,trials\n";
    for (const auto& c : cells) {
        out << to_string(c.robot) << ',' << to_string(c.family) << ','
            << (c.valence ? std::string(to_string(*c.valence)) : std::string()) << ','
            << c.expected << ',' << c.observed << ',' << c.trials << '\n';
    }
    return out.str();
}

std::string ReplayReport::summary() const {
    if (identical) return "identical";
    return "divergence at session " + session_id + " turn " + std::to_string(turn) +
           ": expected \"" + expected + "\" got \"" + actual + "\"";
}

namespace {

// Scratch directory removed on scope exit.
struct ScratchDir {
    std::filesystem::path path;

    ScratchDir() {
        std::random_device rd;
        std::ostringstream name;
        name << "robomem-replay-" << std::hex << rd() << rd();
        path = std::filesystem::temp_directory_path() / name.str();
        std::filesystem::create_directories(path);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;
};

}  // namespace

ReplayReport replay(const Resources& resources, const std::filesystem::path& transcript) {
    return replay(resources, read_transcript(transcript));
}

ReplayReport replay(const Resources& resources, const std::vector<TranscriptEntry>& entries) {
    if (entries.empty()) throw Error(ErrorCode::format, "transcript is empty");
    const std::string user_id = entries.front().user_id;
    const RobotId robot = entries.front().robot;

    // Sessions in order of first appearance.
    std::vector<std::string> order;
    std::map<std::string, std::vector<const TranscriptEntry*>> by_session;
    for (const auto& e : entries) {
        if (e.user_id != user_id || e.robot != robot) {
            throw Error(ErrorCode::format, "transcript mixes users or robots");
        }
        auto& list = by_session[e.session_id];
        if (list.empty()) order.push_back(e.session_id);
        list.push_back(&e);
    }

    ScratchDir scratch;
    ModelStore store(scratch.path);
    DialogueEngine engine(resources, store);
    ReplayReport report;

    auto diverged = [&](const TranscriptEntry& e, const std::string& actual) {
        report.identical = false;
        report.session_id = e.session_id;
        report.turn = e.turn;
        report.expected = e.text;
        report.actual = actual;
        return report;
    };
    auto matches = [](const TranscriptEntry& e, const Turn& t) {
        return e.text == t.text && e.acts == acts_to_json(t.acts) &&
               e.session_index == t.state.session_index;
    };

    for (const auto& sid : order) {
        const auto& list = by_session[sid];
        const TranscriptEntry& opening = *list.front();
        if (opening.speaker != "robot") {
            throw Error(ErrorCode::format, "session " + sid + " does not open with a robot turn");
        }
        Turn turn = engine.start_session(user_id, robot, opening.config, sid);
        ++report.turns_checked;
        if (!matches(opening, turn)) return diverged(opening, turn.text);

        for (std::size_t i = 1; i < list.size(); ++i) {
            const TranscriptEntry& user = *list[i];
            if (user.speaker != "user") {
                throw Error(ErrorCode::format, "robot turn without a user turn in session " + sid);
            }
            if (i + 1 >= list.size()) break;  // trailing user turn with no recorded reply
            const TranscriptEntry& robot_turn = *list[++i];
            if (robot_turn.speaker != "robot") {
                throw Error(ErrorCode::format, "two consecutive user turns in session " + sid);
            }
            if (turn.state.phase == Phase::closed) return diverged(robot_turn, "<session closed>");
            turn = engine.step(std::move(turn.state), user.text,
                               side_channel_from_json(user.side_channel));
            ++report.turns_checked;
            if (!matches(robot_turn, turn)) return diverged(robot_turn, turn.text);
        }
        ++report.sessions_checked;
    }
    return report;
}

}  // namespace robomem
