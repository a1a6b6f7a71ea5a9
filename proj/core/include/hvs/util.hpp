#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hvs {

/// SplitMix64 finalizer. Cheap, well-mixed, stable across platforms.
constexpr uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Derive a child seed from a parent seed and a stream index so that
/// sibling streams (episodes, trajectories, hypotheses) never share state.
constexpr uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

/// FNV-1a over bytes, used to turn string ids into seed streams and to
/// fingerprint configs.
uint64_t fnv1a(std::string_view s);

/// Shortest decimal string that round-trips the double exactly, fixed
/// notation (never scientific). 274.0 -> "274", 16.25 -> "16.25".
std::string format_angle(double v);

/// Fixed one-fractional-digit rendering used by suggestion blocks.
std::string format_angle_1dp(double v);

/// Strict decimal number: optional sign, digits, optional fraction.
/// No exponents, no hex, no inf/nan. Returns false on any violation
/// (including trailing garbage or a non-finite result).
bool parse_angle(std::string_view s, double& out);

std::string base64_encode(const std::vector<uint8_t>& data);
std::vector<uint8_t> base64_decode(std::string_view text);  // throws Error on bad input

std::string read_text_file(const std::filesystem::path& path);  // throws Error
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Environment variable helpers for the remote-client knobs.
std::string env_or(const char* name, const std::string& fallback);
int env_int_or(const char* name, int fallback);

}  // namespace hvs
