#pragma once

#include <cstdint>
#include <string_view>

namespace hammer {

enum class HeatLabel : std::uint8_t { Cold = 0, Hot = 1 };

constexpr std::string_view to_string(HeatLabel label) {
    return label == HeatLabel::Hot ? "hot" : "cold";
}

}  // namespace hammer
