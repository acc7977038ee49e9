#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace energykg {

// An absolute IRI. Construction validates; two IRIs are equal iff their
// texts are byte-identical.
class Iri {
public:
  explicit Iri(std::string value);

  const std::string& str() const noexcept { return value_; }

  bool operator==(const Iri& other) const noexcept = default;
  auto operator<=>(const Iri& other) const noexcept = default;

  // True when `text` would be accepted by the constructor.
  static bool valid(std::string_view text);

private:
  std::string value_;
};

}  // namespace energykg
