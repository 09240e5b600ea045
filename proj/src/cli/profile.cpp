#include "gausstele/cli/profile.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef GAUSSTELE_DEFAULT_PROFILE_DIR
#define GAUSSTELE_DEFAULT_PROFILE_DIR "profiles"
#endif

namespace gausstele::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Profile parse_profile(const std::string& text) {
  Profile profile;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("profile line " + std::to_string(number) + ": expected key=value");
    }
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) {
      throw std::runtime_error("profile line " + std::to_string(number) + ": empty key");
    }
    profile[key] = trim(body.substr(eq + 1));
  }
  return profile;
}

std::filesystem::path profile_directory() {
  if (const char* env = std::getenv("GAUSSTELE_PROFILE_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return GAUSSTELE_DEFAULT_PROFILE_DIR;
}

Profile load_profile(const std::string& name) {
  std::filesystem::path path = profile_directory() / (name + ".profile");
  if (!std::filesystem::exists(path)) {
    if (std::filesystem::is_regular_file(name)) {
      path = name;
    } else {
      throw std::runtime_error("unknown preset '" + name + "' (looked in " +
                               profile_directory().string() + ")");
    }
  }
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_profile(buffer.str());
}

}  // namespace gausstele::cli
