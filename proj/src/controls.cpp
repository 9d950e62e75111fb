#include "mathforge/controls.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace mathforge::controls {

using nlohmann::ordered_json;

namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};

constexpr std::string_view kZoneKeys[] = {"top", "bottom", "left", "right"};

const LayoutRows& zone_rows(const LayoutSpec& l, std::string_view key) {
    if (key == "top") return l.top;
    if (key == "bottom") return l.bottom;
    if (key == "left") return l.left;
    return l.right;
}

LayoutRows& zone_rows(LayoutSpec& l, std::string_view key) {
    return const_cast<LayoutRows&>(zone_rows(std::as_const(l), key));
}

std::string_view input_type_name(InputType t) {
    switch (t) {
        case InputType::Integer: return "integer";
        case InputType::Rational: return "rational";
        case InputType::Text: return "text";
        case InputType::Expression: return "expression";
    }
    return "text";
}

std::string_view widget_name(ColorWidget w) {
    switch (w) {
        case ColorWidget::JPicker: return "jpicker";
        case ColorWidget::Farbtastic: return "farbtastic";
        case ColorWidget::ColorPicker: return "colorpicker";
    }
    return "jpicker";
}

class Checker {
public:
    std::vector<PanelDiagnostic> out;

    void add(DiagKind kind, const std::string& subject, std::string message) {
        out.push_back({kind, subject, std::move(message)});
    }

    void range(const std::string& name, const Rational& vmin, const Rational& vmax, const Rational& step) {
        if (!(vmin < vmax)) add(DiagKind::BadRange, name, "vmin " + vmin.str() + " is not below vmax " + vmax.str());
        if (step.sign() <= 0) add(DiagKind::BadRange, name, "step " + step.str() + " is not positive");
    }

    void within(const std::string& name, const Rational& v, const Rational& lo, const Rational& hi) {
        if (v < lo || v > hi)
            add(DiagKind::DefaultOutOfRange, name, "default " + v.str() + " outside [" + lo.str() + ", " + hi.str() + "]");
    }

    void width(const std::string& name, const std::optional<std::size_t>& w) {
        if (w && *w == 0) add(DiagKind::BadRange, name, "width must be positive");
    }

    void operator()(const std::string& name, const ControlDescriptor& c) {
        std::visit(Overloaded{
                       [&](const Slider& s) {
                           range(name, s.vmin, s.vmax, s.step);
                           within(name, s.default_value, s.vmin, s.vmax);
                       },
                       [&](const RangeSlider& s) {
                           range(name, s.vmin, s.vmax, s.step);
                           within(name, s.default_value.first, s.vmin, s.vmax);
                           within(name, s.default_value.second, s.vmin, s.vmax);
                           if (s.default_value.first > s.default_value.second)
                               add(DiagKind::DefaultOutOfRange, name, "range default has left above right");
                       },
                       [](const Checkbox&) {},
                       [&](const Selector& s) {
                           if (s.values.empty()) add(DiagKind::BadRange, name, "selector has no values");
                           else if (std::find(s.values.begin(), s.values.end(), s.default_value) == s.values.end())
                               add(DiagKind::DefaultOutOfRange, name, "default '" + s.default_value + "' is not among the values");
                           if ((s.nrows && *s.nrows == 0) || (s.ncols && *s.ncols == 0))
                               add(DiagKind::GridSizeMismatch, name, "button grid has a zero dimension");
                           else if (s.buttons && s.nrows && s.ncols && *s.nrows * *s.ncols < s.values.size())
                               add(DiagKind::GridSizeMismatch, name, "button grid smaller than the value list");
                           width(name, s.width);
                       },
                       [&](const InputBox& b) { width(name, b.width); },
                       [&](const InputGrid& g) {
                           if (g.nrows == 0 || g.ncols == 0)
                               add(DiagKind::GridSizeMismatch, name, "input grid has a zero dimension");
                           else if (g.default_value.size() != g.nrows * g.ncols)
                               add(DiagKind::GridSizeMismatch, name,
                                   "expected " + std::to_string(g.nrows * g.ncols) + " default cells, got " +
                                       std::to_string(g.default_value.size()));
                           width(name, g.width);
                       },
                       [&](const ColorSelector& cs) {
                           for (const auto& v : cs.default_value) within(name, v, 0, 1);
                       },
                   },
                   c);
    }
};

Rational rational_field(const ordered_json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    return Rational::parse(v.get<std::string>());
}

std::optional<std::size_t> optional_count(const ordered_json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<std::size_t>();
}

ordered_json optional_json(const std::optional<std::size_t>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json descriptor_json(const ControlDescriptor& c) {
    ordered_json j;
    j["kind"] = kind_name(c);
    std::visit(Overloaded{
                   [&](const Slider& s) {
                       j["vmin"] = s.vmin.str();
                       j["vmax"] = s.vmax.str();
                       j["step"] = s.step.str();
                       j["default"] = s.default_value.str();
                       j["label"] = s.label;
                       j["display_value"] = s.display_value;
                   },
                   [&](const RangeSlider& s) {
                       j["vmin"] = s.vmin.str();
                       j["vmax"] = s.vmax.str();
                       j["step"] = s.step.str();
                       j["default"] = {s.default_value.first.str(), s.default_value.second.str()};
                       j["label"] = s.label;
                   },
                   [&](const Checkbox& b) {
                       j["default"] = b.default_value;
                       j["label"] = b.label;
                   },
                   [&](const Selector& s) {
                       j["values"] = s.values;
                       j["label"] = s.label;
                       j["default"] = s.default_value;
                       j["nrows"] = optional_json(s.nrows);
                       j["ncols"] = optional_json(s.ncols);
                       j["width"] = optional_json(s.width);
                       j["buttons"] = s.buttons;
                   },
                   [&](const InputBox& b) {
                       j["default"] = b.default_value;
                       j["label"] = b.label;
                       j["type"] = input_type_name(b.value_type);
                       j["width"] = optional_json(b.width);
                   },
                   [&](const InputGrid& g) {
                       j["nrows"] = g.nrows;
                       j["ncols"] = g.ncols;
                       j["default"] = g.default_value;
                       j["label"] = g.label;
                       j["width"] = optional_json(g.width);
                   },
                   [&](const ColorSelector& cs) {
                       j["default"] = ordered_json::array();
                       for (const auto& v : cs.default_value) j["default"].push_back(v.str());
                       j["label"] = cs.label;
                       j["widget"] = widget_name(cs.widget);
                       j["hide_box"] = cs.hide_box;
                   },
               },
               c);
    return j;
}

ControlDescriptor descriptor_from_json(const ordered_json& j) {
    auto kind = j.at("kind").get<std::string>();
    auto label = j.value("label", std::string{});
    if (kind == "slider") {
        return Slider{rational_field(j, "vmin"), rational_field(j, "vmax"), rational_field(j, "step"),
                      rational_field(j, "default"), label, j.value("display_value", true)};
    }
    if (kind == "range_slider") {
        const auto& d = j.at("default");
        return RangeSlider{rational_field(j, "vmin"), rational_field(j, "vmax"), rational_field(j, "step"),
                           {Rational::parse(d.at(0).get<std::string>()), Rational::parse(d.at(1).get<std::string>())},
                           label};
    }
    if (kind == "checkbox") return Checkbox{j.at("default").get<bool>(), label};
    if (kind == "selector") {
        return Selector{j.at("values").get<std::vector<std::string>>(),
                        label,
                        j.at("default").get<std::string>(),
                        optional_count(j, "nrows"),
                        optional_count(j, "ncols"),
                        optional_count(j, "width"),
                        j.value("buttons", false)};
    }
    if (kind == "input_box") {
        auto type = j.value("type", std::string("text"));
        InputType t;
        if (type == "integer") t = InputType::Integer;
        else if (type == "rational") t = InputType::Rational;
        else if (type == "text") t = InputType::Text;
        else if (type == "expression") t = InputType::Expression;
        else throw std::invalid_argument("unknown input_box type '" + type + "'");
        return InputBox{j.value("default", std::string{}), label, t, optional_count(j, "width")};
    }
    if (kind == "input_grid") {
        return InputGrid{j.at("nrows").get<std::size_t>(), j.at("ncols").get<std::size_t>(),
                         j.at("default").get<std::vector<std::string>>(), label, optional_count(j, "width")};
    }
    if (kind == "color_selector") {
        const auto& d = j.at("default");
        if (!d.is_array() || d.size() != 3) throw std::invalid_argument("color default needs three components");
        ColorSelector cs;
        for (std::size_t i = 0; i < 3; ++i) cs.default_value[i] = Rational::parse(d[i].get<std::string>());
        cs.label = label;
        auto w = j.value("widget", std::string("jpicker"));
        if (w == "jpicker") cs.widget = ColorWidget::JPicker;
        else if (w == "farbtastic") cs.widget = ColorWidget::Farbtastic;
        else if (w == "colorpicker") cs.widget = ColorWidget::ColorPicker;
        else throw std::invalid_argument("unknown color widget '" + w + "'");
        cs.hide_box = j.value("hide_box", false);
        return cs;
    }
    throw std::invalid_argument("unknown control kind '" + kind + "'");
}

}  // namespace

std::string_view kind_name(const ControlDescriptor& c) {
    static constexpr std::string_view names[] = {"slider",    "range_slider", "checkbox",      "selector",
                                                 "input_box", "input_grid",   "color_selector"};
    return names[c.index()];
}

const char* to_string(DiagKind kind) {
    switch (kind) {
        case DiagKind::BadName: return "BadName";
        case DiagKind::BadRange: return "BadRange";
        case DiagKind::DefaultOutOfRange: return "DefaultOutOfRange";
        case DiagKind::UnknownLayoutName: return "UnknownLayoutName";
        case DiagKind::DuplicateName: return "DuplicateName";
        case DiagKind::GridSizeMismatch: return "GridSizeMismatch";
    }
    return "?";
}

std::vector<PanelDiagnostic> check_panel(const ControlPanel& p) {
    Checker check;
    std::set<std::string> names;
    for (const auto& [name, c] : p.controls) {
        if (name.empty()) check.add(DiagKind::BadName, name, "control name is empty");
        else if (!names.insert(name).second) check.add(DiagKind::DuplicateName, name, "control declared twice");
        check(name, c);
    }
    if (p.layout) {
        std::set<std::string> placed;
        for (auto key : kZoneKeys)
            for (const auto& row : zone_rows(*p.layout, key))
                for (const auto& name : row) {
                    if (!names.contains(name))
                        check.add(DiagKind::UnknownLayoutName, name, "layout zone '" + std::string(key) + "' names an unknown control");
                    else if (!placed.insert(name).second)
                        check.add(DiagKind::DuplicateName, name, "control placed twice in the layout");
                }
    }
    return check.out;
}

namespace {

std::string summarize(const std::vector<PanelDiagnostic>& diags) {
    std::string s = "invalid control panel";
    for (const auto& d : diags) s += std::string("; ") + to_string(d.kind) + " '" + d.subject + "': " + d.message;
    return s;
}

}  // namespace

PanelError::PanelError(std::vector<PanelDiagnostic> diags)
    : std::runtime_error(summarize(diags)), diags_(std::move(diags)) {}

const ControlPanel& validate_panel(const ControlPanel& p) {
    auto diags = check_panel(p);
    if (!diags.empty()) throw PanelError(std::move(diags));
    return p;
}

std::string_view zone_name(Zone z) {
    switch (z) {
        case Zone::Top: return "top";
        case Zone::Left: return "left";
        case Zone::Right: return "right";
        case Zone::Bottom: return "bottom";
    }
    return "top";
}

std::vector<PlacedRow> arrange(const ControlPanel& p) {
    std::vector<PlacedRow> rows;
    std::set<std::string> placed;
    auto emit = [&](Zone z, const LayoutRows& zone) {
        for (const auto& row : zone) {
            if (row.empty()) continue;
            rows.push_back({z, row});
            placed.insert(row.begin(), row.end());
        }
    };
    LayoutSpec empty;
    const auto& layout = p.layout ? *p.layout : empty;
    emit(Zone::Top, layout.top);
    emit(Zone::Left, layout.left);
    emit(Zone::Right, layout.right);
    emit(Zone::Bottom, layout.bottom);
    // the unplaced controls go at the end of the top zone
    std::vector<PlacedRow> extra;
    for (const auto& [name, c] : p.controls)
        if (!placed.contains(name)) extra.push_back({Zone::Top, {name}});
    auto top_end = std::find_if(rows.begin(), rows.end(), [](const PlacedRow& r) { return r.zone != Zone::Top; });
    rows.insert(top_end, extra.begin(), extra.end());
    return rows;
}

std::string render_form_spec(const ControlPanel& p, int indent) {
    ordered_json j;
    j["caption"] = p.caption;
    j["grid"] = ordered_json::array();
    for (const auto& row : arrange(p)) {
        ordered_json r;
        r["zone"] = zone_name(row.zone);
        r["cells"] = row.names;
        j["grid"].push_back(std::move(r));
    }
    j["controls"] = ordered_json::object();
    for (const auto& [name, c] : p.controls) j["controls"][name] = descriptor_json(c);
    if (p.layout) {
        ordered_json l;
        for (auto key : kZoneKeys) l[std::string(key)] = zone_rows(*p.layout, key);
        j["layout"] = std::move(l);
    } else {
        j["layout"] = nullptr;
    }
    return j.dump(indent);
}

ControlPanel parse_form_spec(std::string_view json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const ordered_json::parse_error& e) {
        throw std::invalid_argument(std::string("form spec is not JSON: ") + e.what());
    }
    try {
        ControlPanel p;
        p.caption = j.value("caption", std::string{});
        for (const auto& [name, c] : j.at("controls").items()) p.controls.emplace_back(name, descriptor_from_json(c));
        auto it = j.find("layout");
        if (it != j.end() && !it->is_null()) {
            LayoutSpec l;
            if (it->is_array()) {
                l.top = it->get<LayoutRows>();
            } else {
                for (const auto& [key, rows] : it->items()) {
                    if (std::find(std::begin(kZoneKeys), std::end(kZoneKeys), key) == std::end(kZoneKeys))
                        throw std::invalid_argument("unknown layout zone '" + key + "'");
                    zone_rows(l, key) = rows.get<LayoutRows>();
                }
            }
            p.layout = std::move(l);
        }
        return p;
    } catch (const ordered_json::exception& e) {
        throw std::invalid_argument(std::string("malformed form spec: ") + e.what());
    }
}

}  // namespace mathforge::controls
