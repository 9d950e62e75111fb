#include "mathforge/locale.hpp"

#include <stdexcept>

namespace mathforge {

namespace {

WorksheetStrings make_uk() {
    WorksheetStrings s;
    s.lang = "uk";
    s.variant = "Варіант";
    s.answers = "ВІДПОВІДІ";
    // Cyrillic А and В, as in the original generator
    s.product_ab_missing = "Добуток АВ не існує";
    s.product_ba_missing = "Добуток ВА не існує";
    s.det_intro = "Обчисліть визначник ";
    s.det_using = ", використовуючи:";
    s.det_methods = {
        "а) правило трикутників;",
        "б) метод розкладання визначника за елементами деякого рядка або стовпця;",
        "в) метод зведення до трикутного вигляду.",
    };
    s.product_intro = "Обчисліть добуток ";
    s.product_and = " та ";
    s.inverse_intro = "Знайдіть матрицю, обернену до ";
    s.inverse_methods = {
        "а) за допомогою алгебраїчних доповнень;",
        "б) методом Гауса.",
    };
    s.matrix_eq_intro = "Розв'яжіть матричне рівняння: ";
    s.matpoly_intro = "Обчисліть ";
    s.matpoly_if = ", якщо ";
    s.system_intro = "Розв'яжіть систему рівнянь:";
    s.system_methods = {
        "а) методом Крамера;",
        "б) методом оберненої матриці;",
        "в) методом Гауса.",
    };
    return s;
}

WorksheetStrings make_en() {
    WorksheetStrings s;
    s.lang = "en";
    s.variant = "Variant";
    s.answers = "ANSWERS";
    s.product_ab_missing = "The product AB does not exist";
    s.product_ba_missing = "The product BA does not exist";
    s.det_intro = "Compute the determinant ";
    s.det_using = " using:";
    s.det_methods = {
        "a) the rule of triangles;",
        "b) cofactor expansion along a row or column;",
        "c) reduction to triangular form.",
    };
    s.product_intro = "Compute the products ";
    s.product_and = " and ";
    s.inverse_intro = "Find the inverse of ";
    s.inverse_methods = {
        "a) using cofactors;",
        "b) by Gaussian elimination.",
    };
    s.matrix_eq_intro = "Solve the matrix equation: ";
    s.matpoly_intro = "Compute ";
    s.matpoly_if = ", where ";
    s.system_intro = "Solve the system of equations:";
    s.system_methods = {
        "a) by Cramer's rule;",
        "b) by the inverse matrix method;",
        "c) by Gaussian elimination.",
    };
    return s;
}

}  // namespace

const WorksheetStrings& worksheet_strings(std::string_view lang) {
    static const WorksheetStrings uk = make_uk();
    static const WorksheetStrings en = make_en();
    if (lang.empty() || lang == "uk") return uk;
    if (lang == "en") return en;
    throw std::out_of_range("no worksheet strings for language '" + std::string(lang) + "'");
}

bool has_worksheet_language(std::string_view lang) {
    return lang.empty() || lang == "uk" || lang == "en";
}

}  // namespace mathforge
