#ifndef RCGN_VERDICT_HPP
#define RCGN_VERDICT_HPP

#include <optional>
#include <string>

namespace rcgn {

enum class Truth { Proven, Refuted, Unknown };

inline const char* to_string(Truth t) {
  switch (t) {
    case Truth::Proven: return "Proven";
    case Truth::Refuted: return "Refuted";
    default: return "Unknown";
  }
}

//! Three-valued decision outcome with a machine-checkable certificate:
//! the witness exponent plus the grid range on which the defining
//! inequality was checked. Tests re-run the raw inequality from these.
struct Verdict {
  Truth truth = Truth::Unknown;
  std::optional<long long> witness;  // Q, q or R depending on the decided relation
  int grid_from = 0;   // first grid index the certificate covers
  int grid_to = -1;    // last grid index the certificate covers
  std::string note;

  bool proven() const { return truth == Truth::Proven; }
  bool refuted() const { return truth == Truth::Refuted; }
  bool unknown() const { return truth == Truth::Unknown; }

  static Verdict proven_with(long long w, int from, int to, std::string n = {}) {
    return Verdict{Truth::Proven, w, from, to, std::move(n)};
  }
  static Verdict refuted_with(long long w, int from, int to, std::string n = {}) {
    return Verdict{Truth::Refuted, w, from, to, std::move(n)};
  }
  static Verdict unknown_with(std::string n = {}) {
    return Verdict{Truth::Unknown, std::nullopt, 0, -1, std::move(n)};
  }
};

}  // namespace rcgn

#endif  // RCGN_VERDICT_HPP
