#pragma once

#include "mathforge/esengine.hpp"

#include <iosfwd>
#include <memory>

namespace mathforge::es {

/// Runs a line-oriented consultation: each question is printed with its
/// numbered choices, and each input line is one of
///   <answer>[;<answer>...][@cf]   choice number, choice text or number; cf defaults to 100
///   0 or empty                    "Не знаю"
///   ?                             why the question is asked
///   !                             restart
/// Input lines are echoed after "> " so the output reads as a transcript.
/// When the session finishes the explanation is printed.
/// Returns the final status; InProgress if the input ran out first.
Status run_consult(std::shared_ptr<const kb::KnowledgeBase> kb, std::istream& in, std::ostream& out);

}  // namespace mathforge::es
