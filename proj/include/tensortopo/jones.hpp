#pragma once

#include <map>
#include <optional>
#include <string>

#include "tensortopo/link_diagram.hpp"

namespace tensortopo {

/// Laurent polynomial in t^(1/2): exponent key is twice the power of t.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  static LaurentPoly monomial(int half_exponent, long long coefficient);
  static LaurentPoly one() { return monomial(0, 1); }

  const std::map<int, long long>& terms() const { return terms_; }
  void add(int half_exponent, long long coefficient);
  bool is_one() const { return terms_.size() == 1 && terms_.begin()->first == 0 && terms_.begin()->second == 1; }
  bool operator==(const LaurentPoly&) const = default;
  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  /// t -> 1/t.
  LaurentPoly mirrored() const;

  /// Ascending powers, e.g. "-t^-4 + t^-3 + t^-1", "-t^-1/2 - t^1/2", "1".
  std::string to_string() const;
  static LaurentPoly parse(const std::string& text);

 private:
  std::map<int, long long> terms_;
};

/// Kauffman bracket <D> as a polynomial in A (exponent -> coefficient),
/// normalized so that a single unknot gives 1.
std::map<int, long long> kauffman_bracket(const PdCode& pd);

struct JonesResult {
  std::optional<LaurentPoly> polynomial;  // empty when intractable
  int crossings = 0;                      // after simplification
};

/// V(t) = (-A^3)^(-w) <D> with A = t^(-1/4), on the simplified diagram.
JonesResult jones_polynomial(const LinkDiagram& d, int max_crossings = 16);

enum class KnotState { Knotted, Unknotted, Unresolved };
std::string to_string(KnotState k);

struct KnotAnalysis {
  KnotState state = KnotState::Unresolved;
  std::optional<LaurentPoly> jones;
  int crossings = 0;
};

KnotAnalysis is_knotted(const Polyline3& loop, std::uint64_t seed = 0, int max_crossings = 16);

}  // namespace tensortopo
