#pragma once

#include <string>
#include <vector>

namespace superkilling {

/// A bundled example: `kind` is "check" for definition files runnable by
/// the check command and "liealg" for structure-constant JSON.
struct Fixture {
  const char* name;
  const char* title;
  const char* kind;
  const char* source;
};

const std::vector<Fixture>& fixtures();
const Fixture* find_fixture(const std::string& name);

}  // namespace superkilling
