#pragma once

#include <array>
#include <string_view>

namespace mpt {

inline constexpr int kSpeciesCount = 27;

/// Species vocabulary; class_id k (1-based) names kSpeciesNames[k - 1].
inline constexpr std::array<std::string_view, kSpeciesCount> kSpeciesNames = {
    "Ceratium furca",  "Gymnodinium",       "Ceratium",      "Anabaena",      "Copepoda",
    "Copepod nauplii", "Coscinodiscus",     "Chaetoceros",   "Odontella",     "Leptocylindru",
    "Paralia sulcata", "Melosira",          "Pseudo-nitzschia", "Asterionella", "Guinardia",
    "Protoperidinium", "Pleurosigma",       "Bellerochea",   "Thalassiosira", "Stephanopyxis",
    "Ditylum",         "Entomoneis",        "Akashiwo sanguinea", "Rhizosolenia", "Biddulphia",
    "Triceratium",     "Hemiaulus",
};

/// Throws ValidationError when `class_id` is outside [1, 27].
std::string_view species_name(int class_id);

}  // namespace mpt
