#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "roadrand/error.hpp"
#include "roadrand/serialization.hpp"

namespace roadrand::json_schema {

using serialization::Json;

// Draft 2020-12 subset: type, enum, const, properties, required,
// additionalProperties, items, minItems, maxItems, minLength, minimum,
// maximum, exclusiveMinimum, exclusiveMaximum, anyOf and local "#/$defs/..."
// references.
struct Violation {
  std::string path;  // JSON pointer into the instance
  std::string message;
};

std::vector<Violation> validate(const Json& schema, const Json& instance);

// Names of the schemas compiled into the library.
std::vector<std::string_view> schema_names();
std::string_view schema_text(std::string_view name);
const Json& schema(std::string_view name);

// Throws `code` listing the first violations, prefixed with `origin`.
void require_valid(std::string_view schema_name, const Json& instance,
                   const std::string& origin,
                   ErrorCode code = ErrorCode::kInvalidConfig);

}  // namespace roadrand::json_schema
