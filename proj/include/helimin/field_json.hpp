#pragma once

// JSON form of a MotifField:
//   {"type":"finite","motifs":[{"x":0,"y":0,"pitch":1}]}
//   {"type":"tgb","pitch":0.3,"spacing":1}

#include <helimin/field.hpp>

#include <json.hpp>

#include <string>

namespace helimin {

inline nlohmann::json to_json(const MotifField& f)
{
    nlohmann::json j;
    j["type"] = to_string(f.kind());
    if (f.kind() == FieldKind::Finite) {
        auto motifs = nlohmann::json::array();
        for (const auto& m : f.motifs())
            motifs.push_back({{"x", m.center.real()}, {"y", m.center.imag()}, {"pitch", m.pitch}});
        j["motifs"] = std::move(motifs);
    } else {
        j["pitch"] = f.pitch();
        j["spacing"] = f.spacing();
    }
    return j;
}

inline MotifField field_from_json(const nlohmann::json& j)
{
    auto number = [](const nlohmann::json& obj, const char* key) {
        if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number())
            fail(ErrorCode::InvalidArgument, std::string("field spec: missing numeric '") + key + "'");
        return obj.at(key).get<double>();
    };
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        fail(ErrorCode::InvalidArgument, "field spec: missing 'type'");
    const auto type = j.at("type").get<std::string>();
    if (type == "finite") {
        if (!j.contains("motifs") || !j.at("motifs").is_array())
            fail(ErrorCode::InvalidArgument, "field spec: finite field needs a 'motifs' array");
        std::vector<HelicalMotif> motifs;
        for (const auto& m : j.at("motifs"))
            motifs.push_back({Complex(number(m, "x"), m.contains("y") ? number(m, "y") : 0.0), number(m, "pitch")});
        return MotifField::finite(std::move(motifs));
    }
    if (type == "tgb") return MotifField::tgb(number(j, "pitch"), number(j, "spacing"));
    if (type == "utgb") return MotifField::utgb(number(j, "pitch"), number(j, "spacing"));
    fail(ErrorCode::InvalidArgument, "field spec: unknown type '" + type + "'");
}

inline MotifField field_from_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorCode::InvalidArgument, std::string("field spec is not valid JSON: ") + e.what());
    }
    return field_from_json(j);
}

} // namespace helimin
