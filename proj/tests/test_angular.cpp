#include <cmath>
#include <random>

#include <doctest.h>

#include "molqudit/angular.hpp"

using namespace molqudit;

namespace {

long double fact(int n) { return std::tgamma(static_cast<long double>(n) + 1.0L); }

// Racah's closed form with everything in twice-units; independent of the library.
long double racah(int tj1, int tm1, int tj2, int tm2, int tj, int tm) {
  if (tm1 + tm2 != tm) return 0.0L;
  if (tj < std::abs(tj1 - tj2) || tj > tj1 + tj2 || (tj1 + tj2 + tj) % 2) return 0.0L;
  auto h = [](int t) { return t / 2; };
  const long double pre = std::sqrt((tj + 1) * fact(h(tj1 + tj2 - tj)) * fact(h(tj1 - tj2 + tj)) *
                                    fact(h(-tj1 + tj2 + tj)) / fact(h(tj1 + tj2 + tj) + 1));
  const long double norm = std::sqrt(fact(h(tj + tm)) * fact(h(tj - tm)) * fact(h(tj1 - tm1)) *
                                     fact(h(tj1 + tm1)) * fact(h(tj2 - tm2)) * fact(h(tj2 + tm2)));
  long double sum = 0.0L;
  for (int k = 0; k <= 40; ++k) {
    const int a = h(tj1 + tj2 - tj) - k, b = h(tj1 - tm1) - k, c = h(tj2 + tm2) - k;
    const int d = h(tj - tj2 + tm1) + k, e = h(tj - tj1 - tm2) + k;
    if (a < 0 || b < 0 || c < 0 || d < 0 || e < 0) continue;
    sum += (k % 2 ? -1.0L : 1.0L) / (fact(k) * fact(a) * fact(b) * fact(c) * fact(d) * fact(e));
  }
  return pre * norm * sum;
}

double cg2(int tj1, int tm1, int tj2, int tm2, int tj, int tm) {
  return clebsch_gordan(Spin::from_twice(tj1), Spin::from_twice(tm1), Spin::from_twice(tj2),
                        Spin::from_twice(tm2), Spin::from_twice(tj), Spin::from_twice(tm));
}

}  // namespace

TEST_CASE("known values") {
  CHECK(clebsch_gordan(1, 0, 1, 0, 0, 0) == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(clebsch_gordan(1, 0, 1, 0, 1, 0) == 0.0);
  CHECK(clebsch_gordan(1, 0, 1, 0, 2, 0) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
  CHECK(cg2(1, 1, 1, -1, 0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(clebsch_gordan(2, 2, 1, 1, 3, 3) == 1.0);
}

TEST_CASE("matches the Racah oracle for every j <= 5") {
  double worst = 0.0;
  int count = 0;
  for (int tj1 = 0; tj1 <= 10; ++tj1)
    for (int tj2 = 0; tj2 <= 10; ++tj2)
      for (int tj = std::abs(tj1 - tj2); tj <= std::min(10, tj1 + tj2); tj += 2)
        for (int tm1 = -tj1; tm1 <= tj1; tm1 += 2)
          for (int tm2 = -tj2; tm2 <= tj2; tm2 += 2) {
            const int tm = tm1 + tm2;
            if (std::abs(tm) > tj) continue;
            const double got = cg2(tj1, tm1, tj2, tm2, tj, tm);
            worst = std::max(worst, std::abs(got - static_cast<double>(racah(tj1, tm1, tj2, tm2, tj, tm))));
            ++count;
          }
  CHECK(count > 10000);
  CHECK(worst <= 1e-12);
}

TEST_CASE("orthogonality") {
  double worst = 0.0;
  for (int j1 = 0; j1 <= 5; ++j1)
    for (int j2 = 0; j2 <= 5; ++j2)
      for (int j = std::abs(j1 - j2); j <= std::min(5, j1 + j2); ++j)
        for (int jp = std::abs(j1 - j2); jp <= std::min(5, j1 + j2); ++jp)
          for (int m = -std::min(j, jp); m <= std::min(j, jp); ++m) {
            double s = 0.0;
            for (int m1 = -j1; m1 <= j1; ++m1) {
              const int m2 = m - m1;
              if (std::abs(m2) > j2) continue;
              s += clebsch_gordan(j1, m1, j2, m2, j, m) * clebsch_gordan(j1, m1, j2, m2, jp, m);
            }
            worst = std::max(worst, std::abs(s - (j == jp ? 1.0 : 0.0)));
          }
  CHECK(worst <= 1e-12);
}

TEST_CASE("exact zeros outside the triangle and projection rules") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> jd(0, 5);
  for (int i = 0; i < 1000; ++i) {
    const int j1 = jd(rng), j2 = jd(rng), j = jd(rng);
    const int m1 = std::uniform_int_distribution<int>(-j1, j1)(rng);
    const int m2 = std::uniform_int_distribution<int>(-j2, j2)(rng);
    const int m = std::uniform_int_distribution<int>(-j, j)(rng);
    const bool allowed = m == m1 + m2 && j >= std::abs(j1 - j2) && j <= j1 + j2;
    if (!allowed) CHECK(clebsch_gordan(j1, m1, j2, m2, j, m) == 0.0);
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(clebsch_gordan(1, 2, 1, 0, 1, 2), AngularDomainError);
  CHECK_THROWS_AS(clebsch_gordan(Spin::half(1), 0, 1, 0, 1, 0), AngularDomainError);
  CHECK_THROWS_AS(clebsch_gordan(-1, 0, 1, 0, 1, 0), AngularDomainError);
}

TEST_CASE("basis enumeration") {
  const auto b = enumerate_basis(2);
  REQUIRE(b.size() == 9);
  CHECK(b.front() == RotState{0, 0});
  CHECK(b[1] == RotState{1, -1});
  CHECK(b.back() == RotState{2, 2});
  CHECK(RotState{3, -3}.label() == "3,-3");
}
