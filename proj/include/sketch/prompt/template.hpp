#pragma once

// Prompt wording lives here and nowhere else. Bump kTemplateVersion whenever any
// string below changes so stored corpora can be traced to the wording they used.

namespace sketch::prompt {

inline constexpr const char* kTemplateVersion = "1";

inline constexpr const char* kTaskDescriptionHeader = "[Task Description]";
inline constexpr const char* kLabelArchitectureHeader = "[Label Architecture]";
inline constexpr const char* kOutputFormatHeader = "[Output Format (Json Schema)]";
inline constexpr const char* kInputDataHeader = "[Input Data]";

inline constexpr const char* kInputBegin = "<<<BEGIN INPUT>>>";
inline constexpr const char* kInputEnd = "<<<END INPUT>>>";

inline constexpr const char* kOutputInstruction =
    "Respond with a single JSON value that conforms to the schema above and nothing else.";

inline constexpr const char* kSingleChoice = "Choose exactly one label.";
inline constexpr const char* kMultipleChoice = "Choose one or more labels.";

// Value-selection task used for schema-following training data.
inline constexpr const char* kValueSelectionInstruction =
    "Construct a JSON value that conforms to the JSON schema below, using only values "
    "selected from the candidate list. Respond with the JSON value only.";
inline constexpr const char* kValueSelectionSchemaHeader = "[JSON Schema]";
inline constexpr const char* kValueSelectionCandidatesHeader = "[Candidate Values]";

}  // namespace sketch::prompt
