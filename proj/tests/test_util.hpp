#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ns4/proof_text.hpp"

namespace ns4::testutil {

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline std::string corpus_path(const std::string& name) {
  return std::string(NS4_CORPUS_DIR) + "/" + name;
}

inline Derivation load_corpus(const std::string& name) {
  return parse_derivation(read_file(corpus_path(name)));
}

}  // namespace ns4::testutil
