#pragma once

#include "mathforge/rational.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace mathforge::controls {

struct Slider {
    Rational vmin;
    Rational vmax;
    Rational step{1};
    Rational default_value;
    std::string label;
    bool display_value = true;
    friend bool operator==(const Slider&, const Slider&) = default;
};

struct RangeSlider {
    Rational vmin;
    Rational vmax;
    Rational step{1};
    std::pair<Rational, Rational> default_value;
    std::string label;
    friend bool operator==(const RangeSlider&, const RangeSlider&) = default;
};

struct Checkbox {
    bool default_value = false;
    std::string label;
    friend bool operator==(const Checkbox&, const Checkbox&) = default;
};

struct Selector {
    std::vector<std::string> values;
    std::string label;
    std::string default_value;
    std::optional<std::size_t> nrows;
    std::optional<std::size_t> ncols;
    std::optional<std::size_t> width;
    bool buttons = false;
    friend bool operator==(const Selector&, const Selector&) = default;
};

enum class InputType { Integer, Rational, Text, Expression };

struct InputBox {
    std::string default_value;
    std::string label;
    InputType value_type = InputType::Text;
    std::optional<std::size_t> width;
    friend bool operator==(const InputBox&, const InputBox&) = default;
};

struct InputGrid {
    std::size_t nrows = 1;
    std::size_t ncols = 1;
    std::vector<std::string> default_value;  // row-major, nrows * ncols cells
    std::string label;
    std::optional<std::size_t> width;
    friend bool operator==(const InputGrid&, const InputGrid&) = default;
};

enum class ColorWidget { JPicker, Farbtastic, ColorPicker };

struct ColorSelector {
    std::array<Rational, 3> default_value{};  // r, g, b in [0, 1]
    std::string label;
    ColorWidget widget = ColorWidget::JPicker;
    bool hide_box = false;
    friend bool operator==(const ColorSelector&, const ColorSelector&) = default;
};

using ControlDescriptor =
    std::variant<Slider, RangeSlider, Checkbox, Selector, InputBox, InputGrid, ColorSelector>;

/// "slider", "range_slider", "checkbox", "selector", "input_box", "input_grid", "color_selector".
std::string_view kind_name(const ControlDescriptor& c);

using LayoutRows = std::vector<std::vector<std::string>>;

struct LayoutSpec {
    LayoutRows top;
    LayoutRows bottom;
    LayoutRows left;
    LayoutRows right;
    friend bool operator==(const LayoutSpec&, const LayoutSpec&) = default;
};

struct ControlPanel {
    std::vector<std::pair<std::string, ControlDescriptor>> controls;  // declaration order
    std::optional<LayoutSpec> layout;
    std::string caption;  // may carry inline $...$ math
    friend bool operator==(const ControlPanel&, const ControlPanel&) = default;
};

enum class DiagKind { BadName, BadRange, DefaultOutOfRange, UnknownLayoutName, DuplicateName, GridSizeMismatch };

const char* to_string(DiagKind kind);

struct PanelDiagnostic {
    DiagKind kind;
    std::string subject;  // control name, or the offending layout name
    std::string message;
};

std::vector<PanelDiagnostic> check_panel(const ControlPanel& p);

class PanelError : public std::runtime_error {
public:
    explicit PanelError(std::vector<PanelDiagnostic> diags);
    const std::vector<PanelDiagnostic>& diagnostics() const { return diags_; }

private:
    std::vector<PanelDiagnostic> diags_;
};

/// Returns p when check_panel finds nothing, throws PanelError otherwise.
const ControlPanel& validate_panel(const ControlPanel& p);

enum class Zone { Top, Left, Right, Bottom };

std::string_view zone_name(Zone z);

struct PlacedRow {
    Zone zone;
    std::vector<std::string> names;
    friend bool operator==(const PlacedRow&, const PlacedRow&) = default;
};

/// Rows in render order: top, then the middle band (left column, output
/// area, right column), then bottom. Controls missing from the layout are
/// appended to the top zone one per row, in declaration order.
std::vector<PlacedRow> arrange(const ControlPanel& p);

/// Form-spec JSON: {"caption", "grid", "controls", "layout"} with rationals
/// as "p/q" strings and keys in a fixed order.
std::string render_form_spec(const ControlPanel& p, int indent = -1);

/// Inverse of render_form_spec; "grid" is ignored, "layout" may be a zone
/// object or a bare list of rows (taken as the top zone).
ControlPanel parse_form_spec(std::string_view json_text);

}  // namespace mathforge::controls
