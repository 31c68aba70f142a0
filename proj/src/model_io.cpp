#include "rotordyn/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rotordyn/errors.hpp"

namespace rotordyn {

namespace {

using nlohmann::json;

// Strict schema: every object is checked against its allowed key set so a
// typo ("dieameter") fails with the offending key path instead of being
// silently ignored.
void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& path) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key()))
            throw ModelError("unknown key '" + path + "/" + item.key() + "' in model document");
    }
}

double require_number(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) throw ModelError("missing key '" + path + "/" + key + "'");
    if (!obj[key].is_number()) throw ModelError("key '" + path + "/" + key + "' must be a number");
    return obj[key].get<double>();
}

int require_int(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) throw ModelError("missing key '" + path + "/" + key + "'");
    if (!obj[key].is_number_integer()) throw ModelError("key '" + path + "/" + key + "' must be an integer");
    return obj[key].get<int>();
}

std::string require_string(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) throw ModelError("missing key '" + path + "/" + key + "'");
    if (!obj[key].is_string()) throw ModelError("key '" + path + "/" + key + "' must be a string");
    return obj[key].get<std::string>();
}

Eigen::Matrix2d require_matrix2(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) throw ModelError("missing key '" + path + "/" + key + "'");
    const json& rows = obj[key];
    if (!rows.is_array() || rows.size() != 2)
        throw ModelError("key '" + path + "/" + key + "' must be a 2x2 array");
    Eigen::Matrix2d out;
    for (int r = 0; r < 2; ++r) {
        const json& row = rows[static_cast<size_t>(r)];
        if (!row.is_array() || row.size() != 2)
            throw ModelError("key '" + path + "/" + key + "' must be a 2x2 array");
        for (int c = 0; c < 2; ++c) {
            if (!row[static_cast<size_t>(c)].is_number())
                throw ModelError("key '" + path + "/" + key + "' must contain numbers");
            out(r, c) = row[static_cast<size_t>(c)].get<double>();
        }
    }
    return out;
}

Direction parse_direction(const std::string& text, const std::string& path) {
    if (text == "y") return Direction::Y;
    if (text == "z") return Direction::Z;
    if (text == "ty") return Direction::ThetaY;
    if (text == "tz") return Direction::ThetaZ;
    throw ModelError("key '" + path + "': direction must be one of y, z, ty, tz (got '" + text + "')");
}

}  // namespace

RotorModel parse_model_file(const std::string& document_text) {
    json doc;
    try {
        doc = json::parse(document_text);
    } catch (const json::parse_error& err) {
        throw ModelError(std::string("model document is not valid JSON: ") + err.what());
    }
    if (!doc.is_object()) throw ModelError("model document root must be a JSON object");

    reject_unknown_keys(doc, {"name", "materials", "nodes_x_m", "segments", "disks", "bearings",
                              "constraints", "thermal"},
                        "");

    RotorModel model;
    if (doc.contains("name")) model.name = require_string(doc, "name", "");

    if (!doc.contains("nodes_x_m") || !doc["nodes_x_m"].is_array())
        throw ModelError("missing or invalid 'nodes_x_m' array");
    for (const json& x : doc["nodes_x_m"]) {
        if (!x.is_number()) throw ModelError("'nodes_x_m' must contain numbers");
        model.node_x.push_back(x.get<double>());
    }

    if (!doc.contains("materials") || !doc["materials"].is_object())
        throw ModelError("missing or invalid 'materials' object");
    for (const auto& item : doc["materials"].items()) {
        const std::string path = "materials/" + item.key();
        reject_unknown_keys(item.value(),
                            {"youngs_modulus_pa", "density_kg_m3", "thermal_expansion_per_k"}, path);
        MaterialSpec mat;
        mat.youngs_modulus = require_number(item.value(), "youngs_modulus_pa", path);
        mat.density = require_number(item.value(), "density_kg_m3", path);
        mat.thermal_expansion = require_number(item.value(), "thermal_expansion_per_k", path);
        model.materials[item.key()] = mat;
    }

    if (doc.contains("segments")) {
        if (!doc["segments"].is_array()) throw ModelError("'segments' must be an array");
        int index = 0;
        for (const json& seg_json : doc["segments"]) {
            const std::string path = "segments/" + std::to_string(index++);
            reject_unknown_keys(seg_json,
                                {"start_node", "end_node", "outer_diameter_m", "inner_diameter_m",
                                 "material"},
                                path);
            Segment seg;
            seg.start_node = require_int(seg_json, "start_node", path);
            seg.end_node = require_int(seg_json, "end_node", path);
            seg.outer_diameter = require_number(seg_json, "outer_diameter_m", path);
            seg.inner_diameter =
                seg_json.contains("inner_diameter_m") ? require_number(seg_json, "inner_diameter_m", path) : 0.0;
            seg.material = require_string(seg_json, "material", path);
            model.segments.push_back(seg);
        }
    }

    if (doc.contains("disks")) {
        if (!doc["disks"].is_array()) throw ModelError("'disks' must be an array");
        int index = 0;
        for (const json& disk_json : doc["disks"]) {
            const std::string path = "disks/" + std::to_string(index++);
            reject_unknown_keys(disk_json,
                                {"node", "mass_kg", "diametral_inertia_kg_m2", "polar_inertia_kg_m2"},
                                path);
            Disk disk;
            disk.node = require_int(disk_json, "node", path);
            disk.mass = require_number(disk_json, "mass_kg", path);
            disk.diametral_inertia = require_number(disk_json, "diametral_inertia_kg_m2", path);
            disk.polar_inertia = require_number(disk_json, "polar_inertia_kg_m2", path);
            model.disks.push_back(disk);
        }
    }

    if (doc.contains("bearings")) {
        if (!doc["bearings"].is_array()) throw ModelError("'bearings' must be an array");
        int index = 0;
        for (const json& bearing_json : doc["bearings"]) {
            const std::string path = "bearings/" + std::to_string(index++);
            reject_unknown_keys(bearing_json, {"node", "stiffness_n_per_m", "damping_ns_per_m"}, path);
            Bearing bearing;
            bearing.node = require_int(bearing_json, "node", path);
            bearing.stiffness = require_matrix2(bearing_json, "stiffness_n_per_m", path);
            if (bearing_json.contains("damping_ns_per_m"))
                bearing.damping = require_matrix2(bearing_json, "damping_ns_per_m", path);
            model.bearings.push_back(bearing);
        }
    }

    if (doc.contains("constraints")) {
        if (!doc["constraints"].is_array()) throw ModelError("'constraints' must be an array");
        int index = 0;
        for (const json& con_json : doc["constraints"]) {
            const std::string path = "constraints/" + std::to_string(index++);
            reject_unknown_keys(con_json, {"node", "direction"}, path);
            DofIndex dof;
            dof.node = require_int(con_json, "node", path);
            dof.direction = parse_direction(require_string(con_json, "direction", path), path + "/direction");
            model.constraints.push_back(dof);
        }
    }

    if (doc.contains("thermal")) {
        const std::string path = "thermal";
        reject_unknown_keys(doc["thermal"], {"delta_t_k", "mode", "axial_force_n"}, path);
        ThermalLoad thermal;
        thermal.delta_t = doc["thermal"].contains("delta_t_k") ? require_number(doc["thermal"], "delta_t_k", path) : 0.0;
        const std::string mode = require_string(doc["thermal"], "mode", path);
        if (mode == "fixed") {
            thermal.mode = ThermalMode::FullyConstrainedAxial;
        } else if (mode == "force") {
            thermal.mode = ThermalMode::PrescribedForce;
            thermal.prescribed_force = require_number(doc["thermal"], "axial_force_n", path);
        } else {
            throw ModelError("key 'thermal/mode' must be 'fixed' or 'force' (got '" + mode + "')");
        }
        model.thermal = thermal;
    }

    const ValidationReport report = validate_model(model);
    if (!report.ok()) throw ModelError("model validation failed: " + report.joined_errors());
    return model;
}

RotorModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("cannot open model file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model_file(buffer.str());
}

}  // namespace rotordyn
