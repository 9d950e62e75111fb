#include "mathforge/eskb.hpp"

namespace mathforge::kb {

namespace {

// Kept byte-identical to data/translations/uk.txt.
constexpr std::string_view kUkSource = R"uk(REM Надписи на кнопках
TRANSLATE B_SUBMIT = "Відповісти"
TRANSLATE B_EXPLAIN = "Пояснити"
TRANSLATE B_WHYASK = "Чому питаємо?"
TRANSLATE B_RESTART = "До початку"
TRANSLATE B_RETURN = "Повернутися"
REM Повідомлення
TRANSLATE TR_KB = "База знань:"
TRANSLATE TR_NORESP = "Не знаю"
TRANSLATE TR_HOWCONF = "Наскільки Ви впевнені у відповіді?"
TRANSLATE TR_LOWCONF = "Наполовину (50%)"
TRANSLATE TR_HICONF = "Цілком (100%)"
TRANSLATE TR_YES = "Так"
TRANSLATE TR_NO = "Ні"
REM TRANSLATE TR_FALSE = "хиба"
TRANSLATE TR_RESULTS = "ВИСНОВОК:"
TRANSLATE TR_MINCF = "Мінімальний коефіцієнт довіри для прийняття значення як факту:"
TRANSLATE TR_NOTDETERMINED = "неможливо визначити"
TRANSLATE TR_ISRESULT = "є:"
TRANSLATE TR_WITH = "з"
TRANSLATE TR_CONF = "% довіри"
TRANSLATE TR_ALLGOALS = "всі висновки"
TRANSLATE TR_VALUE = "Значення"
TRANSLATE TR_OF = ""
TRANSLATE TR_THISRULE = "Відповідь для цього правила була уведена з коефіцієнтом довіри "
TRANSLATE TR_RULEASGN = "і надано значення"
TRANSLATE TR_TOFIND = "Для знаходження"
TRANSLATE TR_AVALUE = "значення для"
TRANSLATE TR_ISNEEDED = "необхідно випробувати дане правило:"
TRANSLATE TR_RULE = "ПРАВИЛО:"
TRANSLATE TR_IF = "Якщо"
TRANSLATE TR_THEN = "То"
TRANSLATE TR_AND = "і"
TRANSLATE TR_OR = "або"
TRANSLATE TR_EQUAL = "-"
TRANSLATE TR_LESSTHAN = "менше, ніж"
TRANSLATE TR_GREATER = "більше, ніж"
TRANSLATE TR_NOTEQUAL = "не дорівнює"
TRANSLATE TR_VALUEFOR = "Значення для:"
TRANSLATE TR_FOUND = "було визначено"
TRANSLATE TR_NOTFOUND = "не було визначено"
TRANSLATE TR_WASINPUT = "було уведено з "
TRANSLATE TR_DETERMINED = "Визначено"
TRANSLATE TR_IS = "-"
TRANSLATE TR_FROM = "з:"
TRANSLATE TR_DEFAULTED = "було встановлено за замовчуванням у"
TRANSLATE TR_ONE = "одне зі значень"
TRANSLATE TR_HOWCF1 = "Обчислення % довіри за кількома джерелами для"
)uk";

}  // namespace

std::string_view default_translations_source() { return kUkSource; }

const std::vector<Translation>& default_translations() {
    static const std::vector<Translation> table = parse_kb(kUkSource).translations;
    return table;
}

}  // namespace mathforge::kb
