#pragma once

// Result-or-classification carrier. Failures such as NotInClass, NoPattern or
// DegeneratePair are expected outcomes, not exceptions.

#include <optional>
#include <string>
#include <utility>

namespace jlm {

template <class T>
struct Outcome {
  std::optional<T> value;
  std::string code;    // e.g. "NotInClass"; empty on success
  std::string detail;  // human-readable reason

  static Outcome ok(T v) { return {std::move(v), {}, {}}; }
  static Outcome fail(std::string code, std::string detail) { return {std::nullopt, std::move(code), std::move(detail)}; }

  explicit operator bool() const { return value.has_value(); }
  const T& operator*() const { return *value; }
  const T* operator->() const { return &*value; }
};

}  // namespace jlm
