#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "robomem/dialogue_act.hpp"
#include "robomem/persona.hpp"

namespace robomem {

// Per-persona act templates. Keys are an act kind optionally refined by
// dot-separated variants ("ReAsk.username.hedged"); the most specific key
// present wins. Placeholders are {slot} or {slot|title}; {robot} and {motto}
// come from the persona.
//
// Document: {"robot_id": "...", "templates": {"<key>": "<text>", ...}}
struct TemplatePack {
    RobotId robot = RobotId::RoboTech;
    std::map<std::string, std::string> templates;
};

TemplatePack template_pack_from_json(const nlohmann::json& doc);

class TemplateSet {
public:
    // Fails fast with Error(missing_template) if any pack lacks a base
    // template for some act kind.
    static TemplateSet from_packs(std::vector<TemplatePack> packs);
    // Loads every *.json file in `dir`.
    static TemplateSet load_dir(const std::filesystem::path& dir);

    const TemplatePack& pack(RobotId robot) const;

private:
    std::map<RobotId, TemplatePack> packs_;
};

// Candidate template keys for an act, most specific first.
std::vector<std::string> template_keys(const DialogueAct& act);

std::string render(const DialogueAct& act, const PersonaProfile& persona,
                   const TemplateSet& templates);
// Renders each act and joins them with single spaces.
std::string render(const std::vector<DialogueAct>& acts, const PersonaProfile& persona,
                   const TemplateSet& templates);

}  // namespace robomem
