#pragma once

#include <string>

namespace g2local {

enum class LocalCubicType { split, quad, cubic };

inline std::string etype_name(LocalCubicType t) {
    switch (t) {
        case LocalCubicType::split: return "split";
        case LocalCubicType::quad: return "quad";
        case LocalCubicType::cubic: return "cubic";
    }
    return "?";
}

}  // namespace g2local
