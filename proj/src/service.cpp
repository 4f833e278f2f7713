#include "robomem/service.hpp"

#include <cstdlib>
#include <fstream>
#include <random>

#include "robomem/error.hpp"

namespace robomem {

using nlohmann::json;

void ServiceConfig::merge_json(const json& j) {
    try {
        if (j.contains("store_root")) store_root = j.at("store_root").get<std::string>();
        if (j.contains("mode")) recall.mode = parse_recall_mode(j.at("mode").get<std::string>());
        if (j.contains("threshold")) recall.threshold = j.at("threshold").get<double>();
        if (j.contains("seed")) recall.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("bind")) bind_address = j.at("bind").get<std::string>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::format, std::string("bad server config: ") + e.what());
    }
}

void ServiceConfig::merge_env() {
    auto env = [](const char* name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name); v && *v) return std::string(v);
        return std::nullopt;
    };
    try {
        if (auto v = env("ROBOMEM_STORE_ROOT")) store_root = *v;
        if (auto v = env("ROBOMEM_MODE")) recall.mode = parse_recall_mode(*v);
        if (auto v = env("ROBOMEM_THRESHOLD")) recall.threshold = std::stod(*v);
        if (auto v = env("ROBOMEM_SEED")) recall.seed = std::stoull(*v);
        if (auto v = env("ROBOMEM_BIND")) bind_address = *v;
    } catch (const std::logic_error& e) {
        throw Error(ErrorCode::format, std::string("bad server environment: ") + e.what());
    }
}

namespace {

std::filesystem::path users_path(const std::filesystem::path& root) { return root / "users.json"; }

}  // namespace

Service::Service(const Resources& resources, ServiceConfig config)
    : resources_(resources),
      config_(std::move(config)),
      store_(config_.store_root),
      engine_(resources_, store_),
      id_state_(std::random_device{}() ^ (std::uint64_t{std::random_device{}()} << 32)) {
    const auto path = users_path(config_.store_root);
    if (std::filesystem::exists(path)) {
        std::ifstream in(path);
        try {
            const json doc = json::parse(in);
            for (const auto& u : doc.at("users")) {
                users_[u.at("user_id").get<std::string>()] = u.at("display_name").get<std::string>();
            }
        } catch (const json::exception& e) {
            throw Error(ErrorCode::corruption, path.string() + ": " + e.what());
        }
    }
}

std::string Service::fresh_id(const std::string& prefix) {
    // SplitMix64 over a randomly seeded counter.
    std::uint64_t z = (id_state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    static constexpr char hex[] = "0123456789abcdef";
    std::string id = prefix + "-";
    for (int shift = 60; shift >= 0; shift -= 4) id.push_back(hex[(z >> shift) & 0xf]);
    return id;
}

void Service::persist_users() const {
    json list = json::array();
    for (const auto& [id, name] : users_) list.push_back({{"user_id", id}, {"display_name", name}});
    const auto path = users_path(config_.store_root);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << json{{"users", list}}.dump(2) << '\n';
        if (!out) throw Error(ErrorCode::io, "cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::io, "cannot replace " + path.string());
}

std::string Service::create_user(const std::string& display_name) {
    std::string name;
    try {
        name = normalize_value(display_name);
    } catch (const Error&) {
        throw Error(ErrorCode::empty_name, "display name must not be empty");
    }
    // Keep the caller's casing; normalization only decides emptiness.
    auto first = display_name.find_first_not_of(" \t\r\n");
    auto last = display_name.find_last_not_of(" \t\r\n");
    name = display_name.substr(first, last - first + 1);

    std::lock_guard guard(mutex_);
    std::string id;
    do {
        id = fresh_id("u");
    } while (users_.contains(id));
    users_[id] = name;
    persist_users();
    return id;
}

bool Service::has_user(const std::string& user_id) const {
    std::lock_guard guard(mutex_);
    return users_.contains(user_id);
}

OpenResult Service::open_session(const std::string& user_id, RobotId robot,
                                 const RecallOverrides& overrides) {
    (void)resources_.personas.get(robot);
    RecallConfig cfg = config_.recall;
    if (overrides.mode) cfg.mode = *overrides.mode;
    if (overrides.threshold) cfg.threshold = *overrides.threshold;
    if (overrides.seed) cfg.seed = *overrides.seed;

    const auto pair = std::make_pair(user_id, robot);
    std::string sid;
    {
        std::lock_guard guard(mutex_);
        if (!users_.contains(user_id)) {
            throw Error(ErrorCode::unknown_user, "unknown user '" + user_id + "'");
        }
        if (open_.contains(pair)) {
            throw Error(ErrorCode::conflict, "a session with " + std::string(to_string(robot)) +
                                                 " is already open for this user");
        }
        do {
            sid = fresh_id("s");
        } while (sessions_.contains(sid));
        open_[pair] = sid;
    }

    Turn turn;
    try {
        turn = engine_.start_session(user_id, robot, cfg, sid);
    } catch (...) {
        std::lock_guard guard(mutex_);
        open_.erase(pair);
        throw;
    }

    auto session = std::make_shared<Session>();
    session->handle = {sid, user_id, robot, turn.state.session_index,
                       std::chrono::system_clock::now()};
    session->state = turn.state;
    {
        std::lock_guard guard(mutex_);
        sessions_[sid] = session;
    }
    return {session->handle, std::move(turn.text), std::move(turn.acts), turn.state.phase};
}

std::shared_ptr<Service::Session> Service::find_session(const std::string& session_id) const {
    std::lock_guard guard(mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) {
        throw Error(ErrorCode::unknown_session, "unknown session '" + session_id + "'");
    }
    return it->second;
}

std::optional<SessionHandle> Service::session(const std::string& session_id) const {
    std::lock_guard guard(mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) return std::nullopt;
    return it->second->handle;
}

MessageResult Service::post_message(const std::string& session_id, const std::string& text,
                                    const SideChannel& side) {
    auto session = find_session(session_id);
    std::lock_guard session_guard(session->mutex);
    Turn turn = engine_.step(session->state, text, side);
    session->state = turn.state;
    if (turn.state.phase == Phase::closed) {
        std::lock_guard guard(mutex_);
        open_.erase({session->handle.user_id, session->handle.robot});
    }
    return {std::move(turn.text), std::move(turn.acts), turn.state.phase};
}

json Service::get_model(const std::string& user_id, RobotId robot) const {
    if (!has_user(user_id)) throw Error(ErrorCode::unknown_user, "unknown user '" + user_id + "'");
    (void)resources_.personas.get(robot);
    return model_to_json(store_.load(user_id, robot));
}

std::vector<TranscriptEntry> Service::get_transcript(const std::string& session_id) const {
    auto session = find_session(session_id);
    std::lock_guard session_guard(session->mutex);
    std::vector<TranscriptEntry> out;
    for (auto& e : store_.transcript(session->handle.user_id, session->handle.robot)) {
        if (e.session_id == session_id) out.push_back(std::move(e));
    }
    return out;
}

}  // namespace robomem
