#include <json.hpp>

#include "rendnet/error.hpp"
#include "rendnet/vgdoc.hpp"

namespace rendnet::vgdoc {

using ordered_json = nlohmann::ordered_json;

namespace {

// Converts a byte offset from a nlohmann parse error into line/column.
std::pair<int, int> offset_to_line_col(const std::string& text, size_t byte) {
    int line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

Vec read_vec(const ordered_json& j, int dim, const std::string& path) {
    if (!j.is_array() || (int)j.size() != dim)
        throw ValidationError(path, "expected array of " + std::to_string(dim) + " numbers");
    for (const auto& v : j)
        if (!v.is_number()) throw ValidationError(path, "expected numeric coordinates");
    Vec p{j[0].get<double>(), j[1].get<double>(), 0.0};
    if (dim == 3) p.z = j[2].get<double>();
    return p;
}

ordered_json write_vec(const Vec& p, int dim) {
    ordered_json j = ordered_json::array();
    j.push_back(p.x);
    j.push_back(p.y);
    if (dim == 3) j.push_back(p.z);
    return j;
}

double read_number(const ordered_json& j, const char* key, const std::string& path) {
    if (!j.contains(key) || !j[key].is_number())
        throw ValidationError(path + "." + key, "missing or non-numeric field");
    return j[key].get<double>();
}

CurveSpec read_curve(const ordered_json& j, int dim, const std::string& path) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ValidationError(path, "curve entry must be an object with a \"kind\"");
    std::string kind = j["kind"].get<std::string>();
    if (kind == "line") {
        return CurveSpec::line(read_vec(j.at("p0"), dim, path + ".p0"),
                               read_vec(j.at("p1"), dim, path + ".p1"));
    }
    if (kind == "arc") {
        CurveSpec c = CurveSpec::arc(read_vec(j.at("center"), dim, path + ".center"),
                                     read_number(j, "radius", path),
                                     read_number(j, "start", path),
                                     read_number(j, "sweep", path));
        if (dim == 3) {
            c.ax = read_vec(j.at("ax"), dim, path + ".ax");
            c.ay = read_vec(j.at("ay"), dim, path + ".ay");
        }
        return c;
    }
    if (kind == "quad_bezier") {
        return CurveSpec::quad_bezier(read_vec(j.at("p0"), dim, path + ".p0"),
                                      read_vec(j.at("p1"), dim, path + ".p1"),
                                      read_vec(j.at("p2"), dim, path + ".p2"));
    }
    throw ValidationError(path + ".kind", "unknown curve kind \"" + kind + "\"");
}

SurfaceSpec read_surface(const ordered_json& j, int dim, const std::string& path) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ValidationError(path, "surface entry must be an object with a \"kind\"");
    std::string kind = j["kind"].get<std::string>();
    if (kind == "polygon") {
        if (!j.contains("ring") || !j["ring"].is_array())
            throw ValidationError(path + ".ring", "missing ring array");
        std::vector<Vec> ring;
        for (size_t i = 0; i < j["ring"].size(); ++i)
            ring.push_back(read_vec(j["ring"][i], dim, path + ".ring[" + std::to_string(i) + "]"));
        return SurfaceSpec::polygon(std::move(ring));
    }
    if (kind == "disk") {
        SurfaceSpec s = SurfaceSpec::disk(read_vec(j.at("center"), dim, path + ".center"),
                                          read_number(j, "radius", path));
        if (dim == 3) {
            s.ax = read_vec(j.at("ax"), dim, path + ".ax");
            s.ay = read_vec(j.at("ay"), dim, path + ".ay");
        }
        return s;
    }
    if (kind == "rect") {
        return SurfaceSpec::rect(read_vec(j.at("origin"), dim, path + ".origin"),
                                 read_vec(j.at("u"), dim, path + ".u"),
                                 read_vec(j.at("v"), dim, path + ".v"));
    }
    throw ValidationError(path + ".kind", "unknown surface kind \"" + kind + "\"");
}

} // namespace

VGDocument parse_canonical(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = offset_to_line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(std::string("JSON syntax error: ") + e.what(), line, col);
    }
    if (!j.is_object()) throw ValidationError("", "top level must be an object");
    if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != 1)
        throw ValidationError("version", "unsupported or missing version (expected 1)");
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw ValidationError("dim", "missing dim");
    VGDocument doc;
    doc.dim = j["dim"].get<int>();
    if (doc.dim != 2 && doc.dim != 3) throw ValidationError("dim", "dim must be 2 or 3");
    if (j.contains("label")) {
        if (!j["label"].is_number_integer())
            throw ValidationError("label", "label must be an integer");
        doc.label = j["label"].get<int>();
    }
    if (j.contains("curves")) {
        if (!j["curves"].is_array()) throw ValidationError("curves", "must be an array");
        for (size_t i = 0; i < j["curves"].size(); ++i)
            doc.curves.push_back(
                read_curve(j["curves"][i], doc.dim, "curves[" + std::to_string(i) + "]"));
    }
    if (j.contains("surfaces")) {
        if (!j["surfaces"].is_array()) throw ValidationError("surfaces", "must be an array");
        for (size_t i = 0; i < j["surfaces"].size(); ++i)
            doc.surfaces.push_back(
                read_surface(j["surfaces"][i], doc.dim, "surfaces[" + std::to_string(i) + "]"));
    }
    validate(doc);
    return doc;
}

std::string serialize_canonical(const VGDocument& doc) {
    ordered_json j;
    j["version"] = 1;
    j["dim"] = doc.dim;
    if (doc.label) j["label"] = *doc.label;
    ordered_json curves = ordered_json::array();
    for (const auto& c : doc.curves) {
        ordered_json e;
        e["kind"] = to_string(c.kind);
        switch (c.kind) {
            case CurveKind::Line:
                e["p0"] = write_vec(c.p0, doc.dim);
                e["p1"] = write_vec(c.p1, doc.dim);
                break;
            case CurveKind::Arc:
                e["center"] = write_vec(c.center, doc.dim);
                e["radius"] = c.radius;
                e["start"] = c.start;
                e["sweep"] = c.sweep;
                if (doc.dim == 3) {
                    e["ax"] = write_vec(c.ax, doc.dim);
                    e["ay"] = write_vec(c.ay, doc.dim);
                }
                break;
            case CurveKind::QuadBezier:
                e["p0"] = write_vec(c.p0, doc.dim);
                e["p1"] = write_vec(c.p1, doc.dim);
                e["p2"] = write_vec(c.p2, doc.dim);
                break;
        }
        curves.push_back(std::move(e));
    }
    j["curves"] = std::move(curves);
    ordered_json surfaces = ordered_json::array();
    for (const auto& s : doc.surfaces) {
        ordered_json e;
        e["kind"] = to_string(s.kind);
        switch (s.kind) {
            case SurfaceKind::Polygon: {
                ordered_json ring = ordered_json::array();
                for (const Vec& p : s.ring) ring.push_back(write_vec(p, doc.dim));
                e["ring"] = std::move(ring);
                break;
            }
            case SurfaceKind::Disk:
                e["center"] = write_vec(s.center, doc.dim);
                e["radius"] = s.radius;
                if (doc.dim == 3) {
                    e["ax"] = write_vec(s.ax, doc.dim);
                    e["ay"] = write_vec(s.ay, doc.dim);
                }
                break;
            case SurfaceKind::Rect:
                e["origin"] = write_vec(s.origin, doc.dim);
                e["u"] = write_vec(s.u, doc.dim);
                e["v"] = write_vec(s.v, doc.dim);
                break;
        }
        surfaces.push_back(std::move(e));
    }
    j["surfaces"] = std::move(surfaces);
    return j.dump();
}

} // namespace rendnet::vgdoc
