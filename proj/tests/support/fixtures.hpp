#pragma once

#include <functional>
#include <string>

#include <doctest.h>

#include "lolasched/parser.hpp"

namespace lola::test {

inline std::string data_path(const std::string& rel) { return std::string(LOLA_DATA_DIR) + "/" + rel; }

inline Specification bundled_spec(const std::string& name) { return parse_spec_file(data_path("specs/" + name)); }

/// Kind of the lola::Error thrown by `f`; fails the test if nothing is thrown.
inline ErrorKind error_kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

}  // namespace lola::test
