#pragma once

#include <array>
#include <string>

#include "gemcap/lexicon.hpp"

namespace gemcap::testutil {

/// The three reference records the caption fixtures are built around, one
/// per column of the frozen caption table, plus the expected surface form
/// (and its template index in generate_all order) per level.
struct ReferenceColumn {
    JewelryRecord record;
    std::string basic, normal, complete;
    std::size_t basic_idx, normal_idx, complete_idx;
};

inline std::array<ReferenceColumn, 3> reference_columns() {
    ReferenceColumn earrings{
        JewelryRecord{"earrings",
                      {"yellow gold"},
                      {"diamond", "diamond"},
                      {},
                      {"brilliant-cut", "push-back clasp"},
                      {"sustainable", "exquisite", "secure"}},
        "Earrings in yellow gold.",
        "Yellow gold and diamond earrings.",
        "Earrings in sustainable yellow gold adorned with exquisite, brilliant-cut diamonds "
        "and featuring a secure push-back clasp.",
        0, 0, 0};

    ReferenceColumn solitaire{
        JewelryRecord{"solitaire", {"rose gold"}, {"diamond"}, {}, {"central"}, {"iris"}},
        "Solitaire in rose gold.",
        "Ring in rose gold with central diamond.",
        "Iris solitaire in rose gold with central diamond.",
        0, 1, 0};

    ReferenceColumn bracelet{
        JewelryRecord{"bracelet",
                      {"yellow gold"},
                      {"topaz", "topaz", "topaz"},
                      {},
                      {"sky"},
                      {"sustainable", "dazzling"}},
        "Yellow gold bracelet.",
        "Yellow gold bracelet with topazes.",
        "Sustainable yellow gold bracelet adorned with dazzling sky topazes.",
        1, 2, 1};

    return {earrings, solitaire, bracelet};
}

/// The worked pendant example: record and its expected normal form.
inline JewelryRecord pendant_record() {
    return JewelryRecord{"necklace", {"gold"}, {"sapphire"}, {}, {"pendant"}, {}};
}

inline std::string pendant_normal() {
    return "A gold necklace with a sapphire pendant.";
}

/// Stripping equivalence pair.
inline std::string superlative_caption() {
    return "Earrings in sustainable yellow gold adorned with exquisite, brilliant-cut "
           "diamonds and featuring a secure push-back clasp.";
}

inline std::string stripped_caption() {
    return "Earrings in yellow gold with brilliant-cut diamonds and a push-back clasp.";
}

} // namespace gemcap::testutil
