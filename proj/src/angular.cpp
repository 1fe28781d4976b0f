#include "molqudit/angular.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>

#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>

namespace molqudit {

namespace mp = boost::multiprecision;

std::string RotState::label() const { return fmt::format("{},{}", j, m); }

namespace {

mp::cpp_int factorial(int n) {
  mp::cpp_int r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

void check_pair(Spin j, Spin m, const char* which) {
  if (j.twice() < 0) throw AngularDomainError(fmt::format("negative {}", which));
  if (std::abs(m.twice()) > j.twice())
    throw AngularDomainError(fmt::format("|m| > j for {} (j={}, m={})", which, j.value(), m.value()));
  if ((j.twice() - m.twice()) % 2 != 0)
    throw AngularDomainError(fmt::format("j and m parity mismatch for {}", which));
}

using Key = std::array<int, 6>;

struct Cache {
  std::shared_mutex mutex;
  std::map<Key, double> values;
};

Cache& cache() {
  static Cache c;
  return c;
}

double racah(int tj1, int tm1, int tj2, int tm2, int tj, int tm) {
  // All factorial arguments below are integers once the triangle and parity
  // conditions hold; they are computed from the doubled quantum numbers.
  const int a = (tj1 + tj2 - tj) / 2;
  const int b = (tj1 - tm1) / 2;
  const int c = (tj2 + tm2) / 2;
  const int d = (tj - tj2 + tm1) / 2;
  const int e = (tj - tj1 - tm2) / 2;

  mp::cpp_rational prefactor(factorial((tj + tj1 - tj2) / 2) * factorial((tj - tj1 + tj2) / 2) *
                                 factorial(a) * (tj + 1),
                             factorial((tj1 + tj2 + tj) / 2 + 1));
  prefactor *= factorial((tj + tm) / 2) * factorial((tj - tm) / 2) * factorial((tj1 - tm1) / 2) *
               factorial((tj1 + tm1) / 2) * factorial((tj2 - tm2) / 2) *
               factorial((tj2 + tm2) / 2);

  const int kmin = std::max({0, -d, -e});
  const int kmax = std::min({a, b, c});
  mp::cpp_rational sum = 0;
  for (int k = kmin; k <= kmax; ++k) {
    mp::cpp_rational term(1, factorial(k) * factorial(a - k) * factorial(b - k) *
                                 factorial(c - k) * factorial(d + k) * factorial(e + k));
    if (k % 2 != 0) term = -term;
    sum += term;
  }
  if (sum == 0) return 0.0;
  const mp::cpp_rational squared = prefactor * sum * sum;
  const long double magnitude =
      std::sqrt(static_cast<long double>(mp::numerator(squared).convert_to<long double>() /
                                         mp::denominator(squared).convert_to<long double>()));
  return static_cast<double>(sum > 0 ? magnitude : -magnitude);
}

}  // namespace

double clebsch_gordan(Spin j1, Spin m1, Spin j2, Spin m2, Spin j, Spin m) {
  check_pair(j1, m1, "j1");
  check_pair(j2, m2, "j2");
  check_pair(j, m, "J");
  if (m1.twice() + m2.twice() != m.twice()) return 0.0;
  if (j.twice() < std::abs(j1.twice() - j2.twice()) || j.twice() > j1.twice() + j2.twice())
    return 0.0;
  if ((j1.twice() + j2.twice() + j.twice()) % 2 != 0) return 0.0;

  const Key key{j1.twice(), m1.twice(), j2.twice(), m2.twice(), j.twice(), m.twice()};
  auto& store = cache();
  {
    std::shared_lock lock(store.mutex);
    if (auto it = store.values.find(key); it != store.values.end()) return it->second;
  }
  const double value = racah(key[0], key[1], key[2], key[3], key[4], key[5]);
  std::unique_lock lock(store.mutex);
  store.values.emplace(key, value);
  return value;
}

std::vector<RotState> enumerate_basis(int j_max) {
  if (j_max < 0) throw AngularDomainError("j_max must be non-negative");
  std::vector<RotState> out;
  out.reserve(static_cast<std::size_t>((j_max + 1) * (j_max + 1)));
  for (int j = 0; j <= j_max; ++j)
    for (int m = -j; m <= j; ++m) out.push_back({j, m});
  return out;
}

}  // namespace molqudit
