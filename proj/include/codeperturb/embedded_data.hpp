#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Read-only access to the files under data/, compiled into the library.
namespace codeperturb::embedded {

std::optional<std::string_view> find(std::string_view relative_path);

// Relative paths of embedded files starting with `prefix`, sorted.
std::vector<std::string> list(std::string_view prefix);

}  // namespace codeperturb::embedded
