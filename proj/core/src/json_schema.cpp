#include "roadrand/json_schema.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "roadrand/error.hpp"

namespace roadrand::json_schema {
namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& schema_table();
}

namespace {

class Validator {
 public:
  explicit Validator(const Json& root) : root_(root) {}

  void check(const Json& s, const Json& v, const std::string& path) {
    if (s.is_boolean()) {
      if (!s.get<bool>()) add(path, "no value is allowed here");
      return;
    }
    if (auto it = s.find("$ref"); it != s.end()) {
      check(resolve(it->get<std::string>()), v, path);
    }
    if (auto it = s.find("type"); it != s.end()) {
      bool ok = false;
      if (it->is_array()) {
        for (const auto& t : *it) ok = ok || has_type(v, t.get<std::string>());
      } else {
        ok = has_type(v, it->get<std::string>());
      }
      if (!ok) {
        add(path, "expected type " + it->dump() + ", got " + v.type_name());
        return;
      }
    }
    if (auto it = s.find("enum"); it != s.end()) {
      bool found = false;
      for (const auto& e : *it) found = found || equal(e, v);
      if (!found) add(path, "value " + v.dump() + " not in " + it->dump());
    }
    if (auto it = s.find("const"); it != s.end() && !equal(*it, v)) {
      add(path, "expected constant " + it->dump());
    }
    if (v.is_number()) check_number(s, v.get<double>(), path);
    if (v.is_string()) {
      if (auto it = s.find("minLength");
          it != s.end() && v.get<std::string>().size() < it->get<std::size_t>()) {
        add(path, "string shorter than " + it->dump());
      }
    }
    if (v.is_array()) check_array(s, v, path);
    if (v.is_object()) check_object(s, v, path);
    if (auto it = s.find("anyOf"); it != s.end()) {
      bool any = false;
      for (const auto& alt : *it) {
        Validator sub(root_);
        sub.check(alt, v, path);
        if (sub.violations.empty()) {
          any = true;
          break;
        }
      }
      if (!any) add(path, "value matches none of the alternatives");
    }
  }

  std::vector<Violation> violations;

 private:
  static bool has_type(const Json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    if (t == "number") return v.is_number();
    if (t == "integer") {
      if (v.is_number_integer()) return true;
      if (v.is_number_float()) {
        const double d = v.get<double>();
        return std::isfinite(d) && std::floor(d) == d;
      }
      return false;
    }
    return false;
  }

  static bool equal(const Json& a, const Json& b) {
    if (a.is_number() && b.is_number()) return a.get<double>() == b.get<double>();
    return a == b;
  }

  void check_number(const Json& s, double d, const std::string& path) {
    if (auto it = s.find("minimum"); it != s.end() && d < it->get<double>()) {
      add(path, "value below minimum " + it->dump());
    }
    if (auto it = s.find("maximum"); it != s.end() && d > it->get<double>()) {
      add(path, "value above maximum " + it->dump());
    }
    if (auto it = s.find("exclusiveMinimum"); it != s.end() && d <= it->get<double>()) {
      add(path, "value not above " + it->dump());
    }
    if (auto it = s.find("exclusiveMaximum"); it != s.end() && d >= it->get<double>()) {
      add(path, "value not below " + it->dump());
    }
  }

  void check_array(const Json& s, const Json& v, const std::string& path) {
    if (auto it = s.find("minItems"); it != s.end() && v.size() < it->get<std::size_t>()) {
      add(path, "fewer than " + it->dump() + " items");
    }
    if (auto it = s.find("maxItems"); it != s.end() && v.size() > it->get<std::size_t>()) {
      add(path, "more than " + it->dump() + " items");
    }
    if (auto it = s.find("items"); it != s.end()) {
      for (std::size_t i = 0; i < v.size(); ++i) check(*it, v[i], path + "/" + std::to_string(i));
    }
  }

  void check_object(const Json& s, const Json& v, const std::string& path) {
    if (auto it = s.find("required"); it != s.end()) {
      for (const auto& k : *it) {
        if (!v.contains(k.get<std::string>())) {
          add(path, "missing required property '" + k.get<std::string>() + "'");
        }
      }
    }
    const auto props = s.find("properties");
    const auto extra = s.find("additionalProperties");
    for (auto it = v.begin(); it != v.end(); ++it) {
      const std::string child = path + "/" + it.key();
      if (props != s.end() && props->contains(it.key())) {
        check((*props)[it.key()], it.value(), child);
      } else if (extra != s.end()) {
        check(*extra, it.value(), child);
      }
    }
  }

  const Json& resolve(const std::string& ref) const {
    const std::string prefix = "#/$defs/";
    if (ref.rfind(prefix, 0) != 0) {
      throw Error(ErrorCode::kInvalidConfig, "unsupported schema reference " + ref);
    }
    return root_.at("$defs").at(ref.substr(prefix.size()));
  }

  void add(const std::string& path, std::string msg) {
    violations.push_back({path.empty() ? "/" : path, std::move(msg)});
  }

  const Json& root_;
};

}  // namespace

std::vector<Violation> validate(const Json& schema, const Json& instance) {
  Validator v(schema);
  v.check(schema, instance, "");
  return std::move(v.violations);
}

std::vector<std::string_view> schema_names() {
  std::vector<std::string_view> out;
  for (const auto& [name, text] : detail::schema_table()) out.push_back(name);
  return out;
}

std::string_view schema_text(std::string_view name) {
  for (const auto& [n, text] : detail::schema_table()) {
    if (n == name) return text;
  }
  throw Error(ErrorCode::kInvalidConfig, "no schema named '" + std::string(name) + "'");
}

const Json& schema(std::string_view name) {
  static std::mutex mu;
  static std::map<std::string, Json, std::less<>> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(name); it != cache.end()) return it->second;
  Json parsed = serialization::parse_json(schema_text(name), std::string(name) + ".schema.json");
  return cache.emplace(std::string(name), std::move(parsed)).first->second;
}

void require_valid(std::string_view schema_name, const Json& instance,
                   const std::string& origin, ErrorCode code) {
  const auto violations = validate(schema(schema_name), instance);
  if (violations.empty()) return;
  std::string msg = origin + ": does not match the " + std::string(schema_name) + " schema";
  const std::size_t shown = std::min<std::size_t>(violations.size(), 5);
  for (std::size_t i = 0; i < shown; ++i) {
    msg += "\n  " + violations[i].path + ": " + violations[i].message;
  }
  if (violations.size() > shown) {
    msg += "\n  (" + std::to_string(violations.size() - shown) + " more)";
  }
  throw Error(code, msg);
}

}  // namespace roadrand::json_schema
