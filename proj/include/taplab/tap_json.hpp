#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <taplab/task.hpp>

namespace taplab {

// Canonical compact serialization; byte-identical for equal TAPs.
std::string tap_to_json(const Tap& tap);

// Parses the TAP format. Structural problems throw InvalidInstance; the result
// is neither normalized nor validated.
Tap tap_from_json(std::string_view text);

// Reads a file, parses, normalizes and validates.
Tap load_tap(const std::string& path);
void save_tap(const Tap& tap, const std::string& path);

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t instance_hash(const Tap& tap);
std::string hex64(std::uint64_t v);

}  // namespace taplab
