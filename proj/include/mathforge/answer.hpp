#pragma once

#include "mathforge/ratmat.hpp"

#include <string>
#include <variant>
#include <vector>

namespace mathforge {

struct ScalarAnswer {
    Rational value;
    friend bool operator==(const ScalarAnswer&, const ScalarAnswer&) = default;
};

struct MatrixAnswer {
    RatMatrix value;
    friend bool operator==(const MatrixAnswer&, const MatrixAnswer&) = default;
};

struct VectorAnswer {
    std::vector<Rational> value;
    friend bool operator==(const VectorAnswer&, const VectorAnswer&) = default;
};

/// Non-existence note, e.g. a product of non-conformable matrices.
struct MessageAnswer {
    std::string text;
    friend bool operator==(const MessageAnswer&, const MessageAnswer&) = default;
};

using Answer = std::variant<ScalarAnswer, MatrixAnswer, VectorAnswer, MessageAnswer>;

}  // namespace mathforge
