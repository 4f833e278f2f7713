#include "robomem/http_api.hpp"

#include <chrono>

#include <httplib.h>

namespace robomem {

using nlohmann::json;

int http_status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::unknown_robot:
        case ErrorCode::unknown_user:
        case ErrorCode::unknown_session: return 404;
        case ErrorCode::conflict:
        case ErrorCode::closed_session: return 409;
        case ErrorCode::corruption:
        case ErrorCode::io:
        case ErrorCode::missing_template: return 500;
        default: return 400;
    }
}

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
    send_json(res, http_status_for(code),
              {{"code", std::string(to_string(code))}, {"message", message}});
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        json body = json::parse(req.body);
        if (!body.is_object()) throw Error(ErrorCode::format, "request body must be a JSON object");
        return body;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::format, std::string("invalid JSON body: ") + e.what());
    }
}

// Runs a handler, mapping exceptions to structured error bodies.
template <typename F>
httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const Error& e) {
            send_error(res, e.code(), e.what());
        } catch (const json::exception& e) {
            send_error(res, ErrorCode::format, e.what());
        } catch (const std::exception& e) {
            send_json(res, 500, {{"code", "internal"}, {"message", e.what()}});
        }
    };
}

std::string required_string(const json& body, const char* field) {
    if (!body.contains(field) || !body.at(field).is_string()) {
        throw Error(ErrorCode::format, std::string("missing string field '") + field + "'");
    }
    return body.at(field).get<std::string>();
}

json turn_to_json(const TranscriptEntry& e) {
    return {{"turn", e.turn},
            {"speaker", e.speaker},
            {"text", e.text},
            {"acts", e.acts},
            {"side_channel", e.side_channel}};
}

}  // namespace

void mount_routes(httplib::Server& server, Service& service) {
    server.Get("/health", guarded([&service](const httplib::Request&, httplib::Response& res) {
        json personas = json::array();
        for (const auto& p : service.resources().personas.all()) personas.push_back(persona_to_json(p));
        send_json(res, 200, {{"status", "ok"}, {"personas", personas}});
    }));

    server.Post("/users", guarded([&service](const httplib::Request& req, httplib::Response& res) {
        json body = parse_body(req);
        std::string name = body.value("display_name", std::string());
        std::string id = service.create_user(name);
        send_json(res, 201, {{"user_id", id}, {"display_name", name}});
    }));

    server.Post("/sessions", guarded([&service](const httplib::Request& req,
                                                httplib::Response& res) {
        json body = parse_body(req);
        RecallOverrides overrides;
        if (body.contains("mode") && !body.at("mode").is_null()) {
            overrides.mode = parse_recall_mode(body.at("mode").get<std::string>());
        }
        if (body.contains("threshold") && !body.at("threshold").is_null()) {
            overrides.threshold = body.at("threshold").get<double>();
        }
        if (body.contains("seed") && !body.at("seed").is_null()) {
            overrides.seed = body.at("seed").get<std::uint64_t>();
        }
        OpenResult r = service.open_session(required_string(body, "user_id"),
                                            parse_robot(required_string(body, "robot")), overrides);
        const auto created = std::chrono::duration_cast<std::chrono::seconds>(
                                 r.handle.created_at.time_since_epoch())
                                 .count();
        send_json(res, 201,
                  {{"session_id", r.handle.session_id},
                   {"user_id", r.handle.user_id},
                   {"robot", std::string(to_string(r.handle.robot))},
                   {"session_index", r.handle.session_index},
                   {"created_at", created},
                   {"text", r.text},
                   {"acts", acts_to_json(r.acts)},
                   {"phase", std::string(to_string(r.phase))}});
    }));

    server.Post(R"(/sessions/([^/]+)/messages)",
                guarded([&service](const httplib::Request& req, httplib::Response& res) {
                    json body = parse_body(req);
                    SideChannel side = side_channel_from_json(json{
                        {"emotion_valence", body.value("emotion_valence", json(nullptr))},
                        {"attire", body.value("attire", json(nullptr))}});
                    MessageResult r = service.post_message(req.matches[1],
                                                           body.value("text", std::string()), side);
                    send_json(res, 200,
                              {{"text", r.text},
                               {"acts", acts_to_json(r.acts)},
                               {"phase", std::string(to_string(r.phase))}});
                }));

    server.Get(R"(/users/([^/]+)/models/([^/]+))",
               guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, 200, service.get_model(req.matches[1], parse_robot(req.matches[2].str())));
               }));

    server.Get(R"(/sessions/([^/]+)/transcript)",
               guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   json turns = json::array();
                   for (const auto& e : service.get_transcript(req.matches[1])) {
                       turns.push_back(turn_to_json(e));
                   }
                   send_json(res, 200, {{"session_id", req.matches[1].str()}, {"turns", turns}});
               }));
}

}  // namespace robomem
