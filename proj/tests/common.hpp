#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "luset/parser.hpp"

namespace luset::test {

inline std::string data(const std::string& name) { return std::string(LUSET_TEST_DATA) + "/" + name; }

inline Program load_data(const std::string& name) { return load_program_file(data(name)); }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Ctr on the example input table.
inline constexpr int kInit[] = {1, 2, 1, 1, 0, 2, 4};
inline constexpr int kIncr[] = {1, 2, 2, 3, 3, 1, 2};
inline constexpr bool kRst[] = {false, false, false, false, true, false, true};
inline constexpr int kN[] = {1, 3, 5, 8, 0, 1, 4};
inline constexpr bool kFst[] = {true, false, false, false, false, false, false};
inline constexpr int kPreN[] = {0, 1, 3, 5, 8, 0, 1};

}  // namespace luset::test
