#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "groupprof/profiling.hpp"

namespace groupprof {

// Writes via a temporary file in the same directory plus rename, so readers
// never observe a partial file. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::uint64_t fnv1a64(const std::string& data);
std::string fnv1a64_hex(const std::string& data);
std::string digest_file(const std::filesystem::path& path);

// Group label -> file stem: '<' and '>' become "lt"/"gt", anything outside
// [A-Za-z0-9._-] becomes '_'.
std::string sanitize_label(const std::string& label);

// Profile persistence: <dir>/<label>.tsv holds theta_g, <dir>/<label>.json
// holds lambdas, diagnostics and flags.
void save_profile(const std::filesystem::path& dir, const GroupProfile& profile);
GroupProfile load_profile(const std::filesystem::path& tsv_path,
                          const std::filesystem::path& sidecar_path);
std::map<std::string, GroupProfile> load_profiles(const std::filesystem::path& dir);

}  // namespace groupprof
