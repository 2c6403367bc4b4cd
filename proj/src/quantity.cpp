#include "ruinwalk/quantity.hpp"

namespace ruin {

std::string QuantityKey::label() const {
    std::string out = name;
    if (indices.empty()) return out;
    out += '[';
    bool first = true;
    for (const auto& [idx, value] : indices) {
        if (!first) out += ',';
        first = false;
        out += idx;
        out += '=';
        if (const auto* n = std::get_if<std::int64_t>(&value)) {
            out += std::to_string(*n);
        } else {
            out += std::get<std::string>(value);
        }
    }
    out += ']';
    return out;
}

QuantityKey key(std::string name) { return {std::move(name), {}}; }

QuantityKey key(std::string name, std::string index, IndexValue value) {
    return {std::move(name), {{std::move(index), std::move(value)}}};
}

QuantityKey key(std::string name, std::string i1, IndexValue v1, std::string i2, IndexValue v2) {
    return {std::move(name), {{std::move(i1), std::move(v1)}, {std::move(i2), std::move(v2)}}};
}

}  // namespace ruin
