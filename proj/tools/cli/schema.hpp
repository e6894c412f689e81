#pragma once

#include "varleb/errors.hpp"

#include <json.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace varleb::cli {

using json = nlohmann::json;

std::string escapePointer(const std::string& key);

/// A strict view of one JSON object. Every key must be consumed before finish(); missing
/// keys read with a default are written into the echo tree so the resolved config is
/// self-contained.
class Object {
 public:
  Object(const json& j, std::string pointer, json* echo);

  const std::string& pointer() const { return pointer_; }
  bool has(const std::string& key) const { return j_->contains(key); }
  std::string path(const std::string& key) const { return pointer_ + "/" + escapePointer(key); }

  /// The raw value of a required key; marks it used.
  const json& at(const std::string& key);
  /// The raw value of an optional key (nullptr when absent); marks it used.
  const json* find(const std::string& key);
  json* echoOf(const std::string& key);

  double number(const std::string& key);
  double number(const std::string& key, double def);
  int integer(const std::string& key);
  int integer(const std::string& key, int def);
  bool boolean(const std::string& key, bool def);
  std::string string(const std::string& key);
  std::string string(const std::string& key, const std::string& def);
  std::vector<double> numbers(const std::string& key);
  std::optional<std::vector<double>> numbers(const std::string& key, std::nullopt_t);
  /// A number or the string "inf".
  double extended(const std::string& key, double def);

  Object child(const std::string& key);
  /// As child(), reading an absent key as an empty object.
  Object optionalChild(const std::string& key);
  /// Throws SchemaError naming the first unconsumed key.
  void finish() const;

 private:
  void mark(const std::string& key) { used_.insert(key); }

  const json* j_;
  std::string pointer_;
  json* echo_;
  std::set<std::string> used_;
};

double asNumber(const json& v, const std::string& pointer);
int asInteger(const json& v, const std::string& pointer);
std::vector<double> asNumbers(const json& v, const std::string& pointer);

}  // namespace varleb::cli
