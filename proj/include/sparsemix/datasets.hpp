#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>

#include "sparsemix/builtin_data.hpp"
#include "sparsemix/csv.hpp"

namespace sparsemix {

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Canonical text of a built-in dataset, checked against its recorded hash.
inline std::string_view builtin_text(const std::string& name) {
  std::string_view text;
  std::uint64_t expected = 0;
  if (name == "iris") {
    text = builtin_data::k_iris;
    expected = builtin_data::k_iris_fnv1a;
  } else if (name == "crabs") {
    text = builtin_data::k_crabs;
    expected = builtin_data::k_crabs_fnv1a;
  } else {
    fail(ErrorCode::UnknownDataset, "unknown dataset '" + name + "' (expected iris|crabs)");
  }
  if (fnv1a64(text) != expected) fail(ErrorCode::ChecksumMismatch, "embedded '" + name + "' data is corrupt");
  return text;
}

/// iris: 150 × 4, species 1 = setosa, 2 = versicolor, 3 = virginica.
/// crabs: 200 × 5 (FL, RW, CL, CW, BD), group 1 = blue male, 2 = blue
/// female, 3 = orange male, 4 = orange female.
inline Dataset builtin(const std::string& name) {
  std::istringstream in{std::string(builtin_text(name))};
  const LabelColumn label{name == "iris" ? "species" : "group", 0};
  return parse_csv(in, true, label, name);
}

}  // namespace sparsemix
