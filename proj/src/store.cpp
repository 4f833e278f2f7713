#include "robomem/store.hpp"

#include <fstream>
#include <set>

#include "robomem/error.hpp"

namespace robomem {

using nlohmann::json;

namespace {

json value_to_json(const Value& v) { return value_to_string(v); }

Value value_from_json(Family family, const json& j) {
    const std::string text = j.get<std::string>();
    switch (family) {
        case Family::Interest: {
            auto level = parse_interest(text);
            if (!level) throw Error(ErrorCode::format, "bad interest level '" + text + "'");
            return *level;
        }
        case Family::Emotion:
            return parse_valence(text);
        default:
            if (text.empty()) throw Error(ErrorCode::format, "empty value");
            return text;
    }
}

[[noreturn]] void corrupt(const std::string& what) {
    throw Error(ErrorCode::corruption, "corrupt user model: " + what);
}

MemoryRecord record_from_json(RobotId robot, const json& r) {
    const Family family = parse_family(r.at("family").get<std::string>());
    std::optional<std::string> param;
    if (!r.at("param").is_null()) param = r.at("param").get<std::string>();
    PropertyKey key = PropertyKey::make(family, param);
    if (param && *key.param() != *param) corrupt("param not normalized for " + key.to_string());

    std::optional<Valence> observed;
    if (!r.at("observed_valence").is_null()) {
        observed = parse_valence(r.at("observed_valence").get<std::string>());
    }
    if ((family == Family::Emotion) != observed.has_value()) {
        corrupt("observed_valence present iff family is emotion, violated by " + key.to_string());
    }

    MemoryRecord rec{
        .key = key,
        .value = value_from_json(family, r.at("value")),
        .probability = r.at("probability").get<double>(),
        .status = parse_status(r.at("status").get<std::string>()),
        .observed_valence = observed,
        .session_observed = r.at("session_observed").get<int>(),
    };
    if (!(rec.probability >= 0.0 && rec.probability <= 1.0)) {
        corrupt("probability outside [0,1] for " + key.to_string());
    }
    if (rec.probability != get_probability(robot, key, observed)) {
        corrupt("probability does not match the recall table for " + key.to_string());
    }
    if (observed && std::get<Valence>(rec.value) != perceive_valence(robot, *observed)) {
        corrupt("stored valence inconsistent with observed valence");
    }
    if (rec.session_observed < 1) corrupt("session_observed must be positive");
    return rec;
}

}  // namespace

json model_to_json(const UserModel& model) {
    json records = json::array();
    for (const auto& [key, rec] : model.records) {
        records.push_back({
            {"family", std::string(to_string(key.family()))},
            {"param", key.param() ? json(*key.param()) : json(nullptr)},
            {"value", value_to_json(rec.value)},
            {"probability", rec.probability},
            {"status", std::string(to_string(rec.status))},
            {"observed_valence",
             rec.observed_valence ? json(std::string(to_string(*rec.observed_valence)))
                                  : json(nullptr)},
            {"session_observed", rec.session_observed},
        });
    }
    return {
        {"schema_version", model.schema_version},
        {"user_id", model.user_id},
        {"robot", std::string(to_string(model.robot))},
        {"records", records},
    };
}

UserModel model_from_json(const json& doc) {
    try {
        UserModel model;
        model.schema_version = doc.at("schema_version").get<int>();
        if (model.schema_version != kUserModelSchemaVersion) {
            corrupt("unsupported schema_version " + std::to_string(model.schema_version));
        }
        model.user_id = doc.at("user_id").get<std::string>();
        if (model.user_id.empty()) corrupt("empty user_id");
        model.robot = parse_robot(doc.at("robot").get<std::string>());
        for (const auto& r : doc.at("records")) {
            MemoryRecord rec = record_from_json(model.robot, r);
            PropertyKey key = rec.key;
            if (!model.records.emplace(key, std::move(rec)).second) {
                corrupt("duplicate record for " + key.to_string());
            }
        }
        return model;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::corruption) throw;
        corrupt(e.what());
    } catch (const json::exception& e) {
        corrupt(e.what());
    }
}

void check_user_id(std::string_view user_id) {
    bool ok = !user_id.empty() && user_id.front() != '.';
    for (char c : user_id) {
        ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.');
    }
    if (!ok) {
        throw Error(ErrorCode::invalid_argument, "invalid user id '" + std::string(user_id) + "'");
    }
}

fs::path model_path(const fs::path& store_root, std::string_view user_id, RobotId robot) {
    check_user_id(user_id);
    return store_root / std::string(user_id) / (std::string(to_string(robot)) + ".json");
}

fs::path transcript_path(const fs::path& store_root, std::string_view user_id, RobotId robot) {
    check_user_id(user_id);
    return store_root / std::string(user_id) / (std::string(to_string(robot)) + ".log.jsonl");
}

void save(const UserModel& model, const fs::path& store_root) {
    const fs::path path = model_path(store_root, model.user_id, model.robot);
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCode::io, "cannot create " + path.parent_path().string());

    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error(ErrorCode::io, "cannot write " + tmp.string());
        out << model_to_json(model).dump(2) << '\n';
        if (!out) throw Error(ErrorCode::io, "write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::io, "cannot replace " + path.string() + ": " + ec.message());
}

UserModel load(const fs::path& store_root, std::string_view user_id, RobotId robot) {
    const fs::path path = model_path(store_root, user_id, robot);
    if (!fs::exists(path)) {
        UserModel empty;
        empty.user_id = std::string(user_id);
        empty.robot = robot;
        return empty;
    }
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::corruption, path.string() + ": " + e.what());
    }
    UserModel model = model_from_json(doc);
    if (model.user_id != user_id || model.robot != robot) {
        throw Error(ErrorCode::corruption, path.string() + " belongs to a different user or robot");
    }
    return model;
}

json transcript_entry_to_json(const TranscriptEntry& e) {
    return {
        {"session_id", e.session_id},
        {"turn", e.turn},
        {"speaker", e.speaker},
        {"text", e.text},
        {"acts", e.acts},
        {"side_channel", e.side_channel},
        {"user_id", e.user_id},
        {"robot", std::string(to_string(e.robot))},
        {"session_index", e.session_index},
        {"mode", std::string(to_string(e.config.mode))},
        {"threshold", e.config.threshold},
        {"seed", e.config.seed},
    };
}

TranscriptEntry transcript_entry_from_json(const json& j) {
    try {
        TranscriptEntry e;
        e.session_id = j.at("session_id").get<std::string>();
        e.turn = j.at("turn").get<int>();
        e.speaker = j.at("speaker").get<std::string>();
        if (e.speaker != "user" && e.speaker != "robot") {
            throw Error(ErrorCode::format, "speaker must be 'user' or 'robot'");
        }
        e.text = j.at("text").get<std::string>();
        e.acts = j.at("acts");
        if (!e.acts.is_array()) throw Error(ErrorCode::format, "acts must be an array");
        e.side_channel = j.at("side_channel");
        if (!e.side_channel.is_null() && !e.side_channel.is_object()) {
            throw Error(ErrorCode::format, "side_channel must be an object or null");
        }
        e.user_id = j.at("user_id").get<std::string>();
        e.robot = parse_robot(j.at("robot").get<std::string>());
        e.session_index = j.at("session_index").get<int>();
        e.config.mode = parse_recall_mode(j.at("mode").get<std::string>());
        e.config.threshold = j.at("threshold").get<double>();
        e.config.seed = j.at("seed").get<std::uint64_t>();
        return e;
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::format, std::string("bad transcript entry: ") + ex.what());
    } catch (const Error& ex) {
        if (ex.code() == ErrorCode::format) throw;
        throw Error(ErrorCode::format, std::string("bad transcript entry: ") + ex.what());
    }
}

void append_transcript(const fs::path& path, const TranscriptEntry& entry) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::app);
    if (!out) throw Error(ErrorCode::io, "cannot append to " + path.string());
    out << transcript_entry_to_json(entry).dump() << '\n';
    if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
}

std::vector<TranscriptEntry> read_transcript(const fs::path& path) {
    std::vector<TranscriptEntry> out;
    if (!fs::exists(path)) return out;
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(transcript_entry_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::format,
                        path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

ModelStore::ModelStore(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw Error(ErrorCode::io, "cannot create store root " + root_.string());
}

std::unique_lock<std::mutex> ModelStore::lock(std::string_view user_id, RobotId robot) {
    std::string name = std::string(user_id) + "/" + std::string(to_string(robot));
    std::mutex* m = nullptr;
    {
        std::lock_guard guard(table_mutex_);
        auto& slot = pair_mutexes_[name];
        if (!slot) slot = std::make_unique<std::mutex>();
        m = slot.get();
    }
    return std::unique_lock<std::mutex>(*m);
}

UserModel ModelStore::load(std::string_view user_id, RobotId robot) const {
    return robomem::load(root_, user_id, robot);
}

void ModelStore::save(const UserModel& model) const { robomem::save(model, root_); }

void ModelStore::append_transcript(const TranscriptEntry& entry) const {
    robomem::append_transcript(transcript_path(root_, entry.user_id, entry.robot), entry);
}

std::vector<TranscriptEntry> ModelStore::transcript(std::string_view user_id,
                                                    RobotId robot) const {
    return read_transcript(transcript_path(root_, user_id, robot));
}

int ModelStore::completed_sessions(std::string_view user_id, RobotId robot) const {
    std::set<std::string> done;
    for (const auto& e : transcript(user_id, robot)) {
        if (e.speaker != "robot") continue;
        for (const auto& act : e.acts) {
            if (act.value("kind", "") == "Farewell") done.insert(e.session_id);
        }
    }
    return static_cast<int>(done.size());
}

}  // namespace robomem
