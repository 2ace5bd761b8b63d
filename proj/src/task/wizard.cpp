#include "sketch/task/wizard.hpp"

#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include "sketch/json/text.hpp"
#include "sketch/json/validate.hpp"

namespace sketch::task {

namespace {

using json::SchemaDoc;
using json::SchemaKind;
using json::Value;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  line = trim(line);
  return true;
}

bool is_record_list(const SchemaDoc& s) {
  return s.kind == SchemaKind::Array && s.items && s.items->kind == SchemaKind::Object && !s.items->properties.empty();
}

std::string hint(const SchemaDoc& s) {
  if (s.enum_values) {
    std::string out = "one of:";
    for (const auto& m : *s.enum_values) out += " " + (m.is_string() ? m.as_string() : json::serialize(m));
    return out;
  }
  if (is_record_list(s)) {
    std::string fields;
    for (const auto& p : s.items->properties) fields += (fields.empty() ? "" : " | ") + p.name;
    return "one entry per line as `" + fields + "` or as a JSON object; empty line to finish";
  }
  switch (s.kind) {
    case SchemaKind::String: return "text";
    case SchemaKind::Object: return "JSON object (may span lines)";
    default: return std::string("JSON ") + json::schema_kind_name(s.kind);
  }
}

Value record_from_line(const SchemaDoc& item, const std::string& line) {
  if (line.front() == '{') return json::parse(line);
  json::Object record;
  std::size_t start = 0;
  for (std::size_t i = 0; i < item.properties.size(); ++i) {
    const bool last = i + 1 == item.properties.size();
    const auto bar = last ? std::string::npos : line.find('|', start);
    const std::string part = trim(line.substr(start, bar == std::string::npos ? std::string::npos : bar - start));
    if (!part.empty()) record.set(item.properties[i].name, part);
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return Value(std::move(record));
}

// nullopt: the user skipped an optional field.
std::optional<Value> read_answer(const SchemaDoc& s, bool required, std::istream& in, std::ostream& out) {
  std::string line;
  if (is_record_list(s)) {
    json::Array items;
    for (;;) {
      out << "  > " << std::flush;
      if (!read_line(in, line)) throw WizardAbortedError();
      if (line.empty()) break;
      try {
        items.push_back(record_from_line(*s.items, line));
      } catch (const ParseError& e) {
        out << "  not a JSON object: " << e.what() << "\n";
      }
    }
    if (items.empty() && !required) return std::nullopt;
    return Value(std::move(items));
  }

  std::string buffer;
  for (;;) {
    out << (buffer.empty() ? "> " : "  ") << std::flush;
    if (!read_line(in, line)) throw WizardAbortedError();
    if (buffer.empty() && line.empty()) {
      if (!required) return std::nullopt;
      continue;
    }
    if (s.kind == SchemaKind::String) return Value(line);
    buffer += line + "\n";
    try {
      return json::parse(buffer);
    } catch (const ParseError& e) {
      if (line.empty()) {
        out << "  not valid JSON: " << e.what() << "\n";
        buffer.clear();
      }
    }
  }
}

}  // namespace

Value run_wizard(const TaskSchema& schema, std::istream& in, std::ostream& out) {
  out << "New " << schema.name << " task (" << category_name(schema.category) << ")\n";
  json::Object fields;
  for (const auto& p : schema.spec.properties) {
    const bool required = schema.spec.is_required(p.name);
    out << "\n" << p.name << (required ? " (required)" : " (optional, empty to skip)");
    if (p.schema->description) out << ": " << *p.schema->description;
    out << "\n  " << hint(*p.schema) << "\n";
    for (;;) {
      std::optional<Value> answer = read_answer(*p.schema, required, in, out);
      if (!answer) break;
      json::ValidationReport report = json::validate(*answer, *p.schema, {.lenient = true});
      if (report.valid() && p.name == "outputFormat") {
        try {
          json::parse_schema(*answer);
        } catch (const SchemaError& e) {
          report.violations.push_back({"$", "schema", e.what()});
        }
      }
      if (report.valid()) {
        fields.set(p.name, std::move(*answer));
        break;
      }
      out << "  invalid " << p.name << ":\n" << json::format_report(report) << "  please try again\n";
    }
  }
  return Value(std::move(fields));
}

}  // namespace sketch::task
