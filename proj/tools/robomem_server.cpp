// JSON HTTP front end for the dialogue engine.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <httplib.h>

#include "robomem/error.hpp"
#include "robomem/http_api.hpp"

using namespace robomem;

int main(int argc, char** argv) {
    CLI::App app{"Personality-conditioned robot memory: HTTP service"};
    std::string data_dir = ROBOMEM_DATA_DIR;
    std::string config_path;
    std::optional<std::string> store, mode, bind;
    std::optional<double> threshold;
    std::optional<std::uint64_t> seed;
    app.add_option("--data", data_dir, "Directory with personas.json, kb.json and templates/");
    app.add_option("--config", config_path, "Server config file (JSON)");
    app.add_option("--store", store, "Store root");
    app.add_option("--mode", mode, "Default recall mode")
        ->check(CLI::IsMember({"threshold", "stochastic"}));
    app.add_option("--threshold", threshold, "Default recall threshold")->check(CLI::Range(0.0, 1.0));
    app.add_option("--seed", seed, "Default recall seed");
    app.add_option("--bind", bind, "host:port");
    CLI11_PARSE(app, argc, argv);

    try {
        // Precedence: flags > environment > config file > defaults.
        ServiceConfig config;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw Error(ErrorCode::io, "cannot open " + config_path);
            config.merge_json(nlohmann::json::parse(in));
        }
        config.merge_env();
        if (store) config.store_root = *store;
        if (mode) config.recall.mode = parse_recall_mode(*mode);
        if (threshold) config.recall.threshold = *threshold;
        if (seed) config.recall.seed = *seed;
        if (bind) config.bind_address = *bind;

        auto colon = config.bind_address.rfind(':');
        if (colon == std::string::npos) throw Error(ErrorCode::format, "bind address must be host:port");
        const std::string host = config.bind_address.substr(0, colon);
        const int port = std::stoi(config.bind_address.substr(colon + 1));

        Resources res = Resources::load(data_dir);
        Service service(res, config);
        httplib::Server server;
        mount_routes(server, service);
        std::cerr << "listening on " << host << ":" << port << " (store " << config.store_root
                  << ", mode " << to_string(config.recall.mode) << ")\n";
        if (!server.listen(host, port)) {
            std::cerr << "cannot bind " << config.bind_address << '\n';
            return 1;
        }
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
