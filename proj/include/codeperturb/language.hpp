#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace codeperturb {

// The ten target languages, in the order used for generation.
inline constexpr std::array<std::string_view, 10> kLanguages = {
    "Java", "JavaScript", "PHP", "Python", "C#", "TypeScript", "C", "C++", "Go", "Rust",
};

bool is_canonical_language(std::string_view name);

// Accepts canonical names case-insensitively plus a few common aliases
// ("cpp", "csharp", "js", "ts", "golang", "py", ...). Returns the canonical
// spelling, or nullopt for anything else.
std::optional<std::string> canonical_language(std::string_view name);

// File stem used for per-language data files ("C++" -> "cpp").
std::string language_file_stem(std::string_view canonical_name);

}  // namespace codeperturb
