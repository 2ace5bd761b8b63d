#pragma once

#include <iosfwd>

#include "sketch/errors.hpp"
#include "sketch/json/value.hpp"
#include "sketch/task/catalog.hpp"

namespace sketch::task {

class WizardAbortedError : public Error {
 public:
  WizardAbortedError() : Error("input ended before the task instance was complete") {}
};

/// Terminal form for a task schema: asks for every field of the spec in
/// declaration order on `out` and reads answers from `in`. Each answer is
/// validated against its field schema and asked again when invalid. Optional
/// fields are skipped with an empty answer. Returns the collected fields.
json::Value run_wizard(const TaskSchema& schema, std::istream& in, std::ostream& out);

}  // namespace sketch::task
