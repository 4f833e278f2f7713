#include "robomem/templates.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "robomem/error.hpp"

namespace robomem {

using nlohmann::json;

TemplatePack template_pack_from_json(const json& doc) {
    try {
        TemplatePack pack;
        pack.robot = parse_robot(doc.at("robot_id").get<std::string>());
        pack.templates = doc.at("templates").get<std::map<std::string, std::string>>();
        return pack;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::format, std::string("malformed template pack: ") + e.what());
    }
}

TemplateSet TemplateSet::from_packs(std::vector<TemplatePack> packs) {
    TemplateSet set;
    for (auto& pack : packs) {
        for (ActKind kind : kAllActKinds) {
            if (!pack.templates.contains(std::string(to_string(kind)))) {
                throw Error(ErrorCode::missing_template,
                            std::string(to_string(pack.robot)) + " has no template for " +
                                std::string(to_string(kind)));
            }
        }
        RobotId id = pack.robot;
        if (!set.packs_.emplace(id, std::move(pack)).second) {
            throw Error(ErrorCode::format,
                        "duplicate template pack for " + std::string(to_string(id)));
        }
    }
    return set;
}

TemplateSet TemplateSet::load_dir(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    if (ec) throw Error(ErrorCode::io, "cannot list template directory " + dir.string());
    std::sort(files.begin(), files.end());
    std::vector<TemplatePack> packs;
    for (const auto& f : files) {
        std::ifstream in(f);
        if (!in) throw Error(ErrorCode::io, "cannot open " + f.string());
        try {
            packs.push_back(template_pack_from_json(json::parse(in)));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::format, f.string() + ": " + e.what());
        }
    }
    return from_packs(std::move(packs));
}

const TemplatePack& TemplateSet::pack(RobotId robot) const {
    auto it = packs_.find(robot);
    if (it == packs_.end()) {
        throw Error(ErrorCode::missing_template,
                    "no template pack for " + std::string(to_string(robot)));
    }
    return it->second;
}

std::vector<std::string> template_keys(const DialogueAct& act) {
    const std::string base(to_string(act.kind));
    std::vector<std::string> parts;
    switch (act.kind) {
        case ActKind::AskSlot:
        case ActKind::AskDetail:
        case ActKind::AskMotivation:
        case ActKind::ReAsk:
            parts.push_back(act.slot("family"));
            if (act.slots.contains("param")) parts.push_back(act.slot("param"));
            break;
        case ActKind::SelfDisclose: parts.push_back(act.slot("topic")); break;
        case ActKind::CommentAttire:
        case ActKind::RecallPersonal: parts.push_back(act.slot("aspect")); break;
        case ActKind::ReferenceEmotion: parts.push_back(act.slot("valence")); break;
        case ActKind::Recommend: parts.push_back(act.slot("reason")); break;
        case ActKind::SharedFavouriteCallout: parts.push_back(act.slot("category")); break;
        default: break;
    }
    const bool hedged = act.slot("hedged") == "true";
    std::vector<std::string> keys;
    for (std::size_t n = parts.size() + 1; n-- > 0;) {
        std::string k = base;
        for (std::size_t i = 0; i < n; ++i) k += "." + parts[i];
        if (hedged) keys.push_back(k + ".hedged");
        keys.push_back(k);
    }
    return keys;
}

namespace {

std::string title_case(std::string s) {
    bool start = true;
    for (char& c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            start = true;
        } else if (start) {
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            start = false;
        }
    }
    return s;
}

std::string expand(const std::string& tmpl, const DialogueAct& act,
                   const PersonaProfile& persona) {
    std::string out;
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        std::size_t open = tmpl.find('{', pos);
        if (open == std::string::npos) {
            out.append(tmpl, pos);
            break;
        }
        std::size_t close = tmpl.find('}', open);
        if (close == std::string::npos) {
            throw Error(ErrorCode::format, "unterminated placeholder in template: " + tmpl);
        }
        out.append(tmpl, pos, open - pos);
        std::string name = tmpl.substr(open + 1, close - open - 1);
        bool title = false;
        if (auto bar = name.find('|'); bar != std::string::npos) {
            if (name.substr(bar + 1) != "title") {
                throw Error(ErrorCode::format, "unknown template filter in {" + name + "}");
            }
            title = true;
            name.resize(bar);
        }
        std::string value;
        if (name == "robot") {
            value = std::string(to_string(persona.robot));
        } else if (name == "motto") {
            value = persona.motto;
        } else if (auto it = act.slots.find(name); it != act.slots.end()) {
            value = it->second;
        } else {
            throw Error(ErrorCode::missing_template,
                        std::string(to_string(act.kind)) + " template uses unknown slot {" + name +
                            "}");
        }
        out += title ? title_case(value) : value;
        pos = close + 1;
    }
    return out;
}

}  // namespace

std::string render(const DialogueAct& act, const PersonaProfile& persona,
                   const TemplateSet& templates) {
    const TemplatePack& pack = templates.pack(persona.robot);
    for (const auto& key : template_keys(act)) {
        if (auto it = pack.templates.find(key); it != pack.templates.end()) {
            return expand(it->second, act, persona);
        }
    }
    throw Error(ErrorCode::missing_template,
                "no template for " + std::string(to_string(act.kind)));
}

std::string render(const std::vector<DialogueAct>& acts, const PersonaProfile& persona,
                   const TemplateSet& templates) {
    std::string out;
    for (const auto& act : acts) {
        std::string piece = render(act, persona, templates);
        if (piece.empty()) continue;
        if (!out.empty()) out += ' ';
        out += piece;
    }
    return out;
}

}  // namespace robomem
