#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mathforge {

/// Worksheet text for one language.
struct WorksheetStrings {
    std::string lang;

    std::string variant;        // "Варіант"
    std::string answers;        // "ВІДПОВІДІ"
    std::string product_ab_missing;
    std::string product_ba_missing;

    std::string det_intro;      // before the determinant
    std::string det_using;      // after it
    std::vector<std::string> det_methods;

    std::string product_intro;  // "Обчисліть добуток"
    std::string product_and;    // "та"

    std::string inverse_intro;
    std::vector<std::string> inverse_methods;

    std::string matrix_eq_intro;

    std::string matpoly_intro;  // "Обчисліть"
    std::string matpoly_if;     // ", якщо"

    std::string system_intro;
    std::vector<std::string> system_methods;
};

/// Known languages are "uk" (default) and "en". Unknown tags throw
/// std::out_of_range.
const WorksheetStrings& worksheet_strings(std::string_view lang);

bool has_worksheet_language(std::string_view lang);

}  // namespace mathforge
