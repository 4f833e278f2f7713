#pragma once

#include <filesystem>
#include <random>
#include <sstream>
#include <string>

#include "robomem/dialogue.hpp"

namespace robomem::testing {

inline std::filesystem::path data_dir() { return ROBOMEM_DATA_DIR; }

inline const Resources& resources() {
    static const Resources res = Resources::load(data_dir());
    return res;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::mt19937_64 rng{std::random_device{}()};
        std::ostringstream name;
        name << "robomem-test-" << std::hex << rng();
        path_ = std::filesystem::temp_directory_path() / name.str();
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline bool has_act(const std::vector<DialogueAct>& acts, ActKind kind) {
    for (const auto& a : acts) {
        if (a.kind == kind) return true;
    }
    return false;
}

inline bool has_act(const std::vector<DialogueAct>& acts, ActKind kind, const PropertyKey& key) {
    for (const auto& a : acts) {
        if (a.kind == kind && a.key() == key) return true;
    }
    return false;
}

inline bool has_act_slot(const std::vector<DialogueAct>& acts, ActKind kind,
                         const std::string& slot, const std::string& value) {
    for (const auto& a : acts) {
        if (a.kind == kind && a.slot(slot) == value) return true;
    }
    return false;
}

}  // namespace robomem::testing
