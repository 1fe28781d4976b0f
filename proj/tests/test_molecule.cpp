#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "molqudit/molecule.hpp"

using namespace molqudit;

TEST_CASE("rotational energies") {
  const auto srf = presets::srf();
  const double b = 2.0 * M_PI * 2.99792458e10 * 0.25;
  CHECK(rot_energy(srf, 0) == 0.0);
  CHECK(rot_energy(srf, 1) == doctest::Approx(2.0 * b).epsilon(1e-14));
  CHECK(rot_energy(srf, 1) == doctest::Approx(9.4175e10).epsilon(1e-4));
  const auto rbcs = presets::rbcs();
  CHECK(rot_energy(rbcs, 2) == doctest::Approx(6.0 * 2.0 * M_PI * 2.99792458e10 * 0.0163).epsilon(1e-14));
  for (int j = 0; j < 8; ++j)
    CHECK(rot_energy(srf, j + 1) - rot_energy(srf, j) == doctest::Approx(2.0 * b * (j + 1)).epsilon(1e-12));
  CHECK_THROWS_AS(rot_energy(srf, -1), std::domain_error);
}

TEST_CASE("interaction strength") {
  const auto srf = presets::srf();
  // 3.5 D at 0.3 um, worked by hand in SI units.
  CHECK(ddi_strength(srf, 0.3) == doctest::Approx(4.3022527e5).epsilon(1e-6));
  CHECK(ddi_strength(srf, 0.6) * 8.0 == doctest::Approx(ddi_strength(srf, 0.3)).epsilon(1e-15));
  auto doubled = srf;
  doubled.dipole_moment_debye *= 2.0;
  CHECK(ddi_strength(doubled, 0.5) == doctest::Approx(4.0 * ddi_strength(srf, 0.5)).epsilon(1e-15));
  auto zero = srf;
  zero.dipole_moment_debye = 0.0;
  CHECK(ddi_strength(zero, 0.3) == 0.0);
  CHECK_THROWS(ddi_strength(srf, 0.0));
  CHECK_THROWS(ddi_strength(srf, -1.0));
}

TEST_CASE("validation") {
  auto bad = presets::srf();
  bad.mass_amu = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  TrapSpec trap;
  CHECK_NOTHROW(trap.validate());
  trap.min_separation_um = 12.0;
  CHECK_THROWS_AS(trap.validate(), ConfigError);
  CHECK_THROWS_AS(presets::by_name("NaK"), ConfigError);
  CHECK(presets::by_name("srf").name == "SrF");
  CHECK(presets::by_name("RbCs").rotational_constant_invcm == 0.0163);
}

TEST_CASE("json round trip and preset directory") {
  nlohmann::json j = presets::rbcs();
  CHECK(j.at("dipole_moment_debye").get<double>() == 1.225);
  const auto back = j.get<MoleculeSpec>();
  CHECK(back.mass_amu == presets::rbcs().mass_amu);

  const auto dir = std::filesystem::temp_directory_path() / "molqudit_presets_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "SrF.json") << R"({"name":"SrF","dipole_moment_debye":4.0,"rotational_constant_invcm":0.25,"mass_amu":106.62})";
  setenv("MOLQUDIT_PRESET_DIR", dir.c_str(), 1);
  CHECK(presets::by_name("SrF").dipole_moment_debye == 4.0);
  unsetenv("MOLQUDIT_PRESET_DIR");
  CHECK(presets::by_name("SrF").dipole_moment_debye == 3.5);
  std::filesystem::remove_all(dir);
}
