#pragma once

// Paths to the bundled group fixtures.

#include <string>
#include <vector>

#include "qenv/group.hpp"

#ifndef QENV_DATA_DIR
#error "QENV_DATA_DIR must be defined"
#endif

inline std::string fixture_path(const std::string& file) { return std::string(QENV_DATA_DIR) + "/" + file; }

inline qenv::FiniteGroup fixture_group(const std::string& name) {
  return qenv::load_group_file(fixture_path(name + ".mtab"));
}

/// Every bundled table fixture of order below 64.
inline std::vector<std::string> small_fixture_names() {
  return {"c1", "c2", "c3", "c4", "c2xc2", "c5", "c6", "s3", "c7", "c8", "c4xc2", "d4", "q8", "c2xc2xc2",
          "g16_3", "g16_13", "g32_6"};
}

inline std::vector<std::string> all_fixture_names() {
  auto names = small_fixture_names();
  names.push_back("g64_149");
  return names;
}
