#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sketch/errors.hpp"
#include "sketch/task/instance.hpp"

namespace sketch::prompt {

class EmptyInputError : public Error {
 public:
  EmptyInputError() : Error("input text is empty") {}
};

struct Section {
  std::string label;  // "Task Description", "Label Architecture", "Output Format", "Input Data"
  std::string content;

  friend bool operator==(const Section&, const Section&) = default;
};

struct PackagedPrompt {
  std::string text;
  std::vector<Section> sections;
};

struct PackageOptions {
  /// Indent the schema in the Output Format section instead of compact JSON.
  bool pretty_output_format = false;
  /// Replaces the builtin layout. Placeholders: {taskDesc} {labelArchitecture}
  /// {outputFormat} {input}.
  std::optional<std::string> template_text;
};

/// Deterministically builds the model prompt. Throws EmptyInputError when the
/// input is blank.
PackagedPrompt package(const task::TaskInstance& instance, std::string_view input,
                       const PackageOptions& options = {});

/// Label/type listing for the instance; empty when it has no label-like field.
std::string label_architecture(const task::TaskInstance& instance);

}  // namespace sketch::prompt
