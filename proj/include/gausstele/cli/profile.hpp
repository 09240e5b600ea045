#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace gausstele::cli {

/// Flat key=value profile. Lines starting with '#' and blank lines are
/// ignored; whitespace around keys and values is trimmed.
using Profile = std::map<std::string, std::string>;

Profile parse_profile(const std::string& text);

/// $GAUSSTELE_PROFILE_DIR if set, otherwise the directory compiled in at build time.
std::filesystem::path profile_directory();

/// Loads `<dir>/<name>.profile`, or `name` itself when it names an existing file.
/// Throws std::runtime_error if neither exists.
Profile load_profile(const std::string& name);

}  // namespace gausstele::cli
