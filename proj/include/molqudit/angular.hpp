#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

namespace molqudit {

/// Rotational level |J, M> of a single molecule.
struct RotState {
  int j = 0;
  int m = 0;

  constexpr auto operator<=>(const RotState&) const = default;

  /// True when |M| <= J and J >= 0.
  constexpr bool valid() const noexcept { return j >= 0 && m >= -j && m <= j; }

  std::string label() const;
};

/// An angular-momentum quantum number that may be half-integral, stored as
/// twice its value so arithmetic stays exact.
class Spin {
 public:
  constexpr Spin() = default;
  constexpr Spin(int value) : twice_(2 * value) {}  // NOLINT(google-explicit-constructor)
  static constexpr Spin from_twice(int twice) {
    Spin s;
    s.twice_ = twice;
    return s;
  }
  static constexpr Spin half(int numerator) { return from_twice(numerator); }

  constexpr int twice() const noexcept { return twice_; }
  constexpr bool integral() const noexcept { return twice_ % 2 == 0; }
  constexpr double value() const noexcept { return 0.5 * twice_; }

  constexpr auto operator<=>(const Spin&) const = default;

 private:
  int twice_ = 0;
};

class AngularDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// <j1 m1; j2 m2 | J M> in the Condon-Shortley convention.
///
/// Evaluated with the Racah closed-form sum in exact rational arithmetic; only
/// the final square root is taken in floating point. Results are memoised in a
/// process-wide cache that is safe for concurrent use.
///
/// Throws AngularDomainError when some |m| > j, a j is negative, or an m does
/// not share the half-integrality of its j. Returns exactly 0 when M != m1+m2
/// or J lies outside the triangle |j1-j2| <= J <= j1+j2.
double clebsch_gordan(Spin j1, Spin m1, Spin j2, Spin m2, Spin j, Spin m);

/// All (J, M) with J <= j_max in (J, M) lexicographic order.
std::vector<RotState> enumerate_basis(int j_max);

}  // namespace molqudit
