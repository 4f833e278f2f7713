#pragma once

#include "robomem/error.hpp"
#include "robomem/service.hpp"

namespace httplib {
class Server;
}

namespace robomem {

// POST /users                      {display_name}
// POST /sessions                   {user_id, robot, mode?, threshold?, seed?}
// POST /sessions/{id}/messages     {text, emotion_valence?, attire?}
// GET  /users/{id}/models/{robot}
// GET  /sessions/{id}/transcript
// GET  /health
//
// Errors are {"code", "message"} with stable code strings.
void mount_routes(httplib::Server& server, Service& service);

int http_status_for(ErrorCode code);

}  // namespace robomem
