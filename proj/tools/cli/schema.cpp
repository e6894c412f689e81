#include "schema.hpp"

#include <cmath>

namespace varleb::cli {

std::string escapePointer(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

double asNumber(const json& v, const std::string& pointer) {
  if (!v.is_number()) throw SchemaError(pointer, "expected a number");
  return v.get<double>();
}

int asInteger(const json& v, const std::string& pointer) {
  if (!v.is_number_integer()) throw SchemaError(pointer, "expected an integer");
  return v.get<int>();
}

std::vector<double> asNumbers(const json& v, const std::string& pointer) {
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw SchemaError(pointer, "expected a number or an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(asNumber(v[i], pointer + "/" + std::to_string(i)));
  return out;
}

Object::Object(const json& j, std::string pointer, json* echo) : j_(&j), pointer_(std::move(pointer)), echo_(echo) {
  if (!j.is_object()) throw SchemaError(pointer_.empty() ? "/" : pointer_, "expected an object");
}

const json& Object::at(const std::string& key) {
  if (!has(key)) throw SchemaError(path(key), "required key is missing");
  mark(key);
  return (*j_)[key];
}

const json* Object::find(const std::string& key) {
  if (!has(key)) return nullptr;
  mark(key);
  return &(*j_)[key];
}

json* Object::echoOf(const std::string& key) { return echo_ && echo_->contains(key) ? &(*echo_)[key] : nullptr; }

double Object::number(const std::string& key) { return asNumber(at(key), path(key)); }

double Object::number(const std::string& key, double def) {
  if (const json* v = find(key)) return asNumber(*v, path(key));
  if (echo_) (*echo_)[key] = def;
  return def;
}

int Object::integer(const std::string& key) { return asInteger(at(key), path(key)); }

int Object::integer(const std::string& key, int def) {
  if (const json* v = find(key)) return asInteger(*v, path(key));
  if (echo_) (*echo_)[key] = def;
  return def;
}

bool Object::boolean(const std::string& key, bool def) {
  if (const json* v = find(key)) {
    if (!v->is_boolean()) throw SchemaError(path(key), "expected a boolean");
    return v->get<bool>();
  }
  if (echo_) (*echo_)[key] = def;
  return def;
}

std::string Object::string(const std::string& key) {
  const json& v = at(key);
  if (!v.is_string()) throw SchemaError(path(key), "expected a string");
  return v.get<std::string>();
}

std::string Object::string(const std::string& key, const std::string& def) {
  if (has(key)) return string(key);
  if (echo_) (*echo_)[key] = def;
  return def;
}

std::vector<double> Object::numbers(const std::string& key) { return asNumbers(at(key), path(key)); }

std::optional<std::vector<double>> Object::numbers(const std::string& key, std::nullopt_t) {
  if (const json* v = find(key)) return asNumbers(*v, path(key));
  return std::nullopt;
}

double Object::extended(const std::string& key, double def) {
  const json* v = find(key);
  if (!v) {
    if (echo_) (*echo_)[key] = std::isinf(def) ? json("inf") : json(def);
    return def;
  }
  if (v->is_string() && v->get<std::string>() == "inf") return INFINITY;
  return asNumber(*v, path(key));
}

Object Object::child(const std::string& key) {
  const json& v = at(key);
  return Object(v, path(key), echoOf(key));
}

Object Object::optionalChild(const std::string& key) {
  static const json empty = json::object();
  if (has(key)) return child(key);
  mark(key);
  if (echo_) (*echo_)[key] = json::object();
  return Object(empty, path(key), echoOf(key));
}

void Object::finish() const {
  for (auto it = j_->begin(); it != j_->end(); ++it)
    if (!used_.count(it.key())) throw SchemaError(path(it.key()), "unknown key");
}

}  // namespace varleb::cli
