#pragma once

#include <string>
#include <vector>

namespace sketch::task::detail {

struct BuiltinSchema {
  std::string name;
  std::string category;
  std::vector<std::string> aliases;
  std::string spec;  // JSON text
};

const std::vector<BuiltinSchema>& builtin_schemas();

}  // namespace sketch::task::detail
