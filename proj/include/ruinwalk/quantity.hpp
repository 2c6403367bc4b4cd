#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ruin {

/// Index value of a reported quantity: an integer state, or a tag such as "escape".
using IndexValue = std::variant<std::int64_t, std::string>;

/// Name plus ordered indices, e.g. joint_pmf{a=1, b=4}.
struct QuantityKey {
    std::string name;
    std::vector<std::pair<std::string, IndexValue>> indices;

    std::string label() const;
    auto operator<=>(const QuantityKey&) const = default;
    bool operator==(const QuantityKey&) const = default;
};

QuantityKey key(std::string name);
QuantityKey key(std::string name, std::string index, IndexValue value);
QuantityKey key(std::string name, std::string i1, IndexValue v1, std::string i2, IndexValue v2);

struct QuantityValue {
    QuantityKey key;
    double value = 0.0;
    bool infinite = false;
    std::optional<double> se;
};

}  // namespace ruin
