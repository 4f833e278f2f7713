// Batch driver: scripted multi-session simulation, recall statistics and
// transcript replay. Runs the engine in-process; no server needed.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "robomem/error.hpp"
#include "robomem/sim.hpp"

using namespace robomem;

namespace {

void print_simulation(const SimulationResult& result) {
    for (const auto& e : result.transcript) {
        std::cout << "[" << e.session_id << " #" << e.turn << "] " << e.speaker << ": " << e.text;
        if (e.speaker == "robot" && !e.acts.empty()) {
            std::cout << "  {";
            for (std::size_t i = 0; i < e.acts.size(); ++i) {
                std::cout << (i ? " " : "") << e.acts[i].at("kind").get<std::string>();
            }
            std::cout << "}";
        }
        std::cout << '\n';
    }
    std::cout << model_to_json(result.final_model).dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Personality-conditioned robot memory: simulation tools"};
    app.require_subcommand(1);

    std::string data_dir = ROBOMEM_DATA_DIR;
    app.add_option("--data", data_dir, "Directory with personas.json, kb.json and templates/");

    std::string robot_name;
    std::string script_path;
    int sessions = 2;
    std::string mode = "threshold";
    double threshold = kDefaultRecallThreshold;
    std::uint64_t seed = 0;
    std::string store_dir = "store";
    auto* sim = app.add_subcommand("simulate", "Run a scripted user through several sessions");
    sim->add_option("--robot", robot_name, "RoboTech, SunnyBot or MindStorm")->required();
    sim->add_option("--script", script_path, "User script (JSON)")->required();
    sim->add_option("--sessions", sessions, "Number of sessions")->check(CLI::PositiveNumber);
    sim->add_option("--mode", mode, "threshold or stochastic")
        ->check(CLI::IsMember({"threshold", "stochastic"}));
    sim->add_option("--threshold", threshold, "Recall threshold")->check(CLI::Range(0.0, 1.0));
    sim->add_option("--seed", seed, "Seed for stochastic recall");
    sim->add_option("--store", store_dir, "Store root for models and transcripts");

    int trials = 10000;
    std::string out_path;
    auto* stats = app.add_subcommand("stats", "Monte-Carlo recall frequencies per cell");
    stats->add_option("--trials", trials, "Fresh users per cell")->check(CLI::PositiveNumber);
    stats->add_option("--seed", seed, "Seed for stochastic recall");
    stats->add_option("--out", out_path, "CSV output file (default: stdout)");

    std::string transcript_path;
    auto* rep = app.add_subcommand("replay", "Re-run a transcript and compare robot turns");
    rep->add_option("--transcript", transcript_path, "Transcript log (.log.jsonl)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            Resources res = Resources::load(data_dir);
            RecallConfig config{parse_recall_mode(mode), threshold, seed};
            auto result = simulate(res, parse_robot(robot_name), load_user_script(script_path),
                                   sessions, config, store_dir);
            print_simulation(result);
        } else if (*stats) {
            std::string csv = stats_to_csv(run_stats(trials, seed));
            if (out_path.empty()) {
                std::cout << csv;
            } else {
                std::ofstream out(out_path);
                if (!out) throw Error(ErrorCode::io, "cannot write " + out_path);
                out << csv;
            }
        } else if (*rep) {
            Resources res = Resources::load(data_dir);
            ReplayReport report = replay(res, std::filesystem::path(transcript_path));
            std::cout << report.summary() << '\n';
            return report.identical ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
