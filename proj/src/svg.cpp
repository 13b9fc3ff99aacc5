#include <cctype>
#include <cmath>
#include <cstring>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rendnet/error.hpp"
#include "rendnet/vgdoc.hpp"

namespace rendnet::vgdoc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// --- minimal XML reader -------------------------------------------------
// Handles exactly what SVG subset files need: elements, attributes,
// self-closing tags, comments, declarations. No namespaces, no entities
// beyond the five predefined ones.

struct XmlElement {
    std::string name;
    std::map<std::string, std::string> attrs;
    std::vector<XmlElement> children;
};

class XmlReader {
public:
    explicit XmlReader(const std::string& text) : text_(text) {}

    XmlElement parse_document() {
        skip_misc();
        XmlElement root = parse_element();
        return root;
    }

private:
    const std::string& text_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) {
        int line = 1, col = 1;
        for (size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError("XML: " + msg, line, col);
    }

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    bool consume(const char* s) {
        size_t len = std::strlen(s);
        if (text_.compare(pos_, len, s) == 0) {
            pos_ += len;
            return true;
        }
        return false;
    }

    void skip_until(const char* terminator) {
        size_t at = text_.find(terminator, pos_);
        if (at == std::string::npos) fail(std::string("unterminated construct, expected ") + terminator);
        pos_ = at + std::strlen(terminator);
    }

    void skip_misc() {
        for (;;) {
            skip_ws();
            if (consume("<?")) {
                skip_until("?>");
            } else if (consume("<!--")) {
                skip_until("-->");
            } else if (consume("<!")) {
                skip_until(">");
            } else {
                break;
            }
        }
    }

    std::string parse_name() {
        size_t start = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                          peek() == '-' || peek() == ':' || peek() == '.'))
            ++pos_;
        if (pos_ == start) fail("expected a name");
        return text_.substr(start, pos_ - start);
    }

    std::string decode_entities(const std::string& s) {
        std::string out;
        for (size_t i = 0; i < s.size(); ++i) {
            if (s[i] != '&') {
                out += s[i];
                continue;
            }
            if (s.compare(i, 5, "&amp;") == 0) { out += '&'; i += 4; }
            else if (s.compare(i, 4, "&lt;") == 0) { out += '<'; i += 3; }
            else if (s.compare(i, 4, "&gt;") == 0) { out += '>'; i += 3; }
            else if (s.compare(i, 6, "&quot;") == 0) { out += '"'; i += 5; }
            else if (s.compare(i, 6, "&apos;") == 0) { out += '\''; i += 5; }
            else out += s[i];
        }
        return out;
    }

    XmlElement parse_element() {
        if (!consume("<")) fail("expected '<'");
        XmlElement el;
        el.name = parse_name();
        for (;;) {
            skip_ws();
            if (eof()) fail("unterminated element");
            if (consume("/>")) return el;
            if (consume(">")) break;
            std::string key = parse_name();
            skip_ws();
            if (!consume("=")) fail("expected '=' after attribute name");
            skip_ws();
            char quote = peek();
            if (quote != '"' && quote != '\'') fail("expected quoted attribute value");
            ++pos_;
            size_t start = pos_;
            while (!eof() && peek() != quote) ++pos_;
            if (eof()) fail("unterminated attribute value");
            el.attrs[key] = decode_entities(text_.substr(start, pos_ - start));
            ++pos_;
        }
        // Content: child elements and ignorable text.
        for (;;) {
            size_t lt = text_.find('<', pos_);
            if (lt == std::string::npos) fail("unterminated element <" + el.name + ">");
            pos_ = lt;
            if (consume("</")) {
                std::string n = parse_name();
                if (n != el.name) fail("mismatched closing tag </" + n + ">");
                skip_ws();
                if (!consume(">")) fail("expected '>'");
                return el;
            }
            if (consume("<!--")) {
                skip_until("-->");
                continue;
            }
            if (consume("<!")) {
                skip_until(">");
                continue;
            }
            el.children.push_back(parse_element());
        }
    }
};

// --- SVG path data ------------------------------------------------------

class PathScanner {
public:
    explicit PathScanner(const std::string& d) : d_(d) {}

    bool at_end() {
        skip_separators();
        return pos_ >= d_.size();
    }

    size_t offset() const { return pos_; }

    char read_command() {
        skip_separators();
        if (pos_ >= d_.size()) fail("expected a path command");
        char c = d_[pos_];
        if (!std::isalpha(static_cast<unsigned char>(c))) fail("expected a path command");
        ++pos_;
        return c;
    }

    bool next_is_number() {
        skip_separators();
        if (pos_ >= d_.size()) return false;
        char c = d_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
    }

    double read_number() {
        skip_separators();
        size_t start = pos_;
        const char* begin = d_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) fail("expected a number");
        pos_ += static_cast<size_t>(end - begin);
        (void)start;
        return v;
    }

    double read_flag() {
        skip_separators();
        if (pos_ >= d_.size() || (d_[pos_] != '0' && d_[pos_] != '1')) fail("expected flag 0 or 1");
        return d_[pos_++] == '1' ? 1.0 : 0.0;
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError("path data: " + msg + " at token offset " + std::to_string(pos_));
    }

private:
    const std::string& d_;
    size_t pos_ = 0;

    void skip_separators() {
        while (pos_ < d_.size() &&
               (std::isspace(static_cast<unsigned char>(d_[pos_])) || d_[pos_] == ','))
            ++pos_;
    }
};

struct SvgBuilder {
    VGDocument doc;

    static bool filled(const XmlElement& el) {
        auto it = el.attrs.find("fill");
        return it == el.attrs.end() || it->second != "none";
    }

    static double attr_number(const XmlElement& el, const std::string& key, double fallback) {
        auto it = el.attrs.find(key);
        if (it == el.attrs.end()) return fallback;
        try {
            return std::stod(it->second);
        } catch (...) {
            throw ParseError("invalid numeric attribute " + key + "=\"" + it->second + "\" on <" +
                             el.name + ">");
        }
    }

    static std::vector<Vec> parse_points(const XmlElement& el) {
        auto it = el.attrs.find("points");
        if (it == el.attrs.end()) throw ParseError("<" + el.name + "> missing points attribute");
        PathScanner sc(it->second);
        std::vector<Vec> pts;
        while (!sc.at_end()) {
            double x = sc.read_number();
            double y = sc.read_number();
            pts.push_back({x, y, 0.0});
        }
        if (pts.size() < 2) throw ParseError("<" + el.name + "> needs at least 2 points");
        return pts;
    }

    void add_line_curve(const Vec& a, const Vec& b) {
        if (distance(a, b) > 0.0) doc.curves.push_back(CurveSpec::line(a, b));
    }

    void handle_line(const XmlElement& el) {
        Vec a{attr_number(el, "x1", 0), attr_number(el, "y1", 0), 0};
        Vec b{attr_number(el, "x2", 0), attr_number(el, "y2", 0), 0};
        add_line_curve(a, b);
    }

    void handle_polyline(const XmlElement& el, bool close) {
        std::vector<Vec> pts = parse_points(el);
        for (size_t i = 0; i + 1 < pts.size(); ++i) add_line_curve(pts[i], pts[i + 1]);
        if (close && distance(pts.back(), pts.front()) > 0.0)
            add_line_curve(pts.back(), pts.front());
        if (close && filled(el)) doc.surfaces.push_back(SurfaceSpec::polygon(pts));
    }

    void handle_rect(const XmlElement& el) {
        double x = attr_number(el, "x", 0), y = attr_number(el, "y", 0);
        double w = attr_number(el, "width", 0), h = attr_number(el, "height", 0);
        if (!(w > 0.0) || !(h > 0.0)) throw ParseError("<rect> needs positive width and height");
        Vec o{x, y, 0}, c1{x + w, y, 0}, c2{x + w, y + h, 0}, c3{x, y + h, 0};
        add_line_curve(o, c1);
        add_line_curve(c1, c2);
        add_line_curve(c2, c3);
        add_line_curve(c3, o);
        if (filled(el)) doc.surfaces.push_back(SurfaceSpec::rect(o, {w, 0, 0}, {0, h, 0}));
    }

    void handle_circle(const XmlElement& el) {
        double cx = attr_number(el, "cx", 0), cy = attr_number(el, "cy", 0);
        double r = attr_number(el, "r", 0);
        if (!(r > 0.0)) throw ParseError("<circle> needs positive r");
        Vec c{cx, cy, 0};
        doc.curves.push_back(CurveSpec::arc(c, r, 0.0, kPi));
        doc.curves.push_back(CurveSpec::arc(c, r, kPi, kPi));
        if (filled(el)) doc.surfaces.push_back(SurfaceSpec::disk(c, r));
    }

    // Converts the SVG endpoint arc parametrization to center form. Only
    // circular arcs (rx == ry) are accepted.
    CurveSpec arc_from_endpoints(const Vec& from, double rx, double ry, double large_arc,
                                 double sweep_flag, const Vec& to, PathScanner& sc) {
        if (std::abs(rx - ry) > 1e-12 * std::max(std::abs(rx), std::abs(ry)))
            sc.fail("elliptical arc with rx != ry is not supported");
        double r = std::abs(rx);
        if (!(r > 0.0)) sc.fail("arc radius must be nonzero");
        Vec mid = (from + to) * 0.5;
        Vec half = (to - from) * 0.5;
        double d2 = norm2(half);
        if (d2 == 0.0) sc.fail("arc endpoints coincide");
        double r2 = r * r;
        if (r2 < d2) r2 = d2; // scale radius up, per SVG out-of-range rule
        double h = std::sqrt(std::max(0.0, r2 - d2));
        Vec perp{-half.y, half.x, 0};
        perp = normalized(perp);
        bool clockwise_center = (large_arc != 0.0) == (sweep_flag != 0.0);
        Vec center = clockwise_center ? mid + perp * h : mid - perp * h;
        double a0 = std::atan2(from.y - center.y, from.x - center.x);
        double a1 = std::atan2(to.y - center.y, to.x - center.x);
        double sweep = a1 - a0;
        if (sweep_flag != 0.0) {
            if (sweep <= 0) sweep += 2 * kPi;
        } else {
            if (sweep >= 0) sweep -= 2 * kPi;
        }
        return CurveSpec::arc(center, std::sqrt(r2), a0, sweep);
    }

    void handle_path(const XmlElement& el) {
        auto it = el.attrs.find("d");
        if (it == el.attrs.end()) throw ParseError("<path> missing d attribute");
        PathScanner sc(it->second);
        bool fill = filled(el);

        std::vector<Vec> subpath_flat; // flattened ring for a fill surface
        std::vector<size_t> subpath_curves;
        Vec current{0, 0, 0}, subpath_start{0, 0, 0};
        bool have_subpath = false;
        bool closed = false;

        auto flatten_tail = [&](const CurveSpec& c) {
            for (int i = 1; i <= 16; ++i) subpath_flat.push_back(eval_curve(c, i / 16.0));
        };
        auto finish_subpath = [&]() {
            if (fill && closed && subpath_flat.size() >= 3) {
                // Drop the duplicated closing vertex if present.
                std::vector<Vec> ring = subpath_flat;
                if (distance(ring.front(), ring.back()) < 1e-12) ring.pop_back();
                if (ring.size() >= 3) doc.surfaces.push_back(SurfaceSpec::polygon(std::move(ring)));
            }
            subpath_flat.clear();
            subpath_curves.clear();
            closed = false;
        };

        char cmd = 0;
        while (!sc.at_end()) {
            if (sc.next_is_number() && cmd != 0) {
                // implicit command repetition; M/m repeats as L/l
                if (cmd == 'M') cmd = 'L';
                if (cmd == 'm') cmd = 'l';
            } else {
                cmd = sc.read_command();
            }
            bool rel = std::islower(static_cast<unsigned char>(cmd));
            char op = static_cast<char>(std::toupper(static_cast<unsigned char>(cmd)));
            switch (op) {
                case 'M': {
                    finish_subpath();
                    double x = sc.read_number(), y = sc.read_number();
                    current = rel && have_subpath ? current + Vec{x, y, 0} : Vec{x, y, 0};
                    subpath_start = current;
                    subpath_flat = {current};
                    have_subpath = true;
                    break;
                }
                case 'L': {
                    double x = sc.read_number(), y = sc.read_number();
                    Vec to = rel ? current + Vec{x, y, 0} : Vec{x, y, 0};
                    if (distance(current, to) > 0.0) {
                        doc.curves.push_back(CurveSpec::line(current, to));
                        subpath_flat.push_back(to);
                    }
                    current = to;
                    break;
                }
                case 'Q': {
                    double x1 = sc.read_number(), y1 = sc.read_number();
                    double x = sc.read_number(), y = sc.read_number();
                    Vec c1 = rel ? current + Vec{x1, y1, 0} : Vec{x1, y1, 0};
                    Vec to = rel ? current + Vec{x, y, 0} : Vec{x, y, 0};
                    CurveSpec c = CurveSpec::quad_bezier(current, c1, to);
                    doc.curves.push_back(c);
                    flatten_tail(c);
                    current = to;
                    break;
                }
                case 'A': {
                    double rx = sc.read_number(), ry = sc.read_number();
                    sc.read_number(); // x-axis-rotation, irrelevant for circular arcs
                    double laf = sc.read_flag(), sf = sc.read_flag();
                    double x = sc.read_number(), y = sc.read_number();
                    Vec to = rel ? current + Vec{x, y, 0} : Vec{x, y, 0};
                    CurveSpec c = arc_from_endpoints(current, rx, ry, laf, sf, to, sc);
                    doc.curves.push_back(c);
                    flatten_tail(c);
                    current = to;
                    break;
                }
                case 'Z': {
                    if (distance(current, subpath_start) > 0.0) {
                        doc.curves.push_back(CurveSpec::line(current, subpath_start));
                        subpath_flat.push_back(subpath_start);
                    }
                    current = subpath_start;
                    closed = true;
                    break;
                }
                default:
                    throw ParseError(std::string("unsupported path command ") + cmd);
            }
        }
        finish_subpath();
    }

    void walk(const XmlElement& el) {
        if (el.name == "line") handle_line(el);
        else if (el.name == "polyline") handle_polyline(el, false);
        else if (el.name == "polygon") handle_polyline(el, true);
        else if (el.name == "rect") handle_rect(el);
        else if (el.name == "circle") handle_circle(el);
        else if (el.name == "path") handle_path(el);
        else throw ParseError("unsupported element <" + el.name + ">");
    }
};

} // namespace

VGDocument parse_svg(const std::string& text) {
    XmlReader reader(text);
    XmlElement root = reader.parse_document();
    SvgBuilder builder;
    builder.doc.dim = 2;
    if (root.name == "svg") {
        for (const auto& child : root.children) builder.walk(child);
    } else {
        builder.walk(root);
    }
    validate(builder.doc);
    return builder.doc;
}

} // namespace rendnet::vgdoc
