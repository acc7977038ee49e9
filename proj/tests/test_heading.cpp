#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "energykg/error.hpp"
#include "energykg/heading.hpp"
#include "energykg/table.hpp"
#include "support/generators.hpp"

using namespace energykg;

TEST_CASE("the worked decomposition parses") {
  const RoleTable roles = RoleTable::defaults();
  const SystemDescriptor d = parse_heading("DE_KN_industrial1_pv_1", roles);
  CHECK(d.country == "DE");
  CHECK(d.locality == "KN");
  CHECK(d.site_kind == SiteKind::Industrial);
  CHECK(d.site_ordinal == 1);
  CHECK(d.device_kind == "pv");
  CHECK(d.device_ordinal == 1);
  CHECK(d.power_role == PowerRole::Produced);
}

TEST_CASE("ordinal-free and consumer headings") {
  const RoleTable roles = RoleTable::defaults();
  const SystemDescriptor pv = parse_heading("DE_KN_residential1_pv", roles);
  CHECK(pv.device_kind == "pv");
  CHECK_FALSE(pv.device_ordinal.has_value());
  CHECK(pv.power_role == PowerRole::Produced);

  const SystemDescriptor dw = parse_heading("DE_KN_residential1_dishwasher", roles);
  CHECK(dw.site_kind == SiteKind::Residential);
  CHECK(dw.device_kind == "dishwasher");
  CHECK(dw.power_role == PowerRole::Consumed);
}

TEST_CASE("parse errors name the offending segment") {
  const RoleTable roles = RoleTable::defaults();
  CHECK_THROWS_WITH_AS((void)parse_heading("XX_KN_castle1_pv", roles),
                       doctest::Contains("castle1"), Error);
  CHECK_THROWS_WITH_AS((void)parse_heading("DE_KN_residential1_warpdrive", roles),
                       doctest::Contains("warpdrive"), Error);
  CHECK_THROWS_AS((void)parse_heading("de_KN_residential1_pv", roles), Error);
  CHECK_THROWS_AS((void)parse_heading("DE_kn_residential1_pv", roles), Error);
  CHECK_THROWS_AS((void)parse_heading("DE_KN_residential0_pv", roles), Error);
  CHECK_THROWS_AS((void)parse_heading("DE_KN_residential_pv", roles), Error);
  CHECK_THROWS_AS((void)parse_heading("DE_KN", roles), Error);
  CHECK_THROWS_AS((void)parse_heading("", roles), Error);
}

TEST_CASE("multi-underscore device kinds use longest match") {
  const RoleTable roles = RoleTable::defaults();
  CHECK(parse_heading("DE_KN_industrial2_storage_charge", roles).device_kind == "storage_charge");
  CHECK(parse_heading("DE_KN_industrial2_storage_decharge", roles).power_role ==
        PowerRole::Produced);
  CHECK(parse_heading("DE_KN_industrial3_area_room_1", roles).device_kind == "area_room");
  CHECK(parse_heading("DE_KN_industrial3_area_room_1", roles).device_ordinal == 1);
  CHECK(parse_heading("DE_KN_industrial3_machine_2", roles).device_kind == "machine");
  CHECK(parse_heading("DE_KN_industrial3_pv_facade", roles).device_kind == "pv_facade");
}

TEST_CASE("grid feeds resolve per the role table") {
  const RoleTable roles = RoleTable::defaults();
  CHECK(parse_heading("DE_KN_residential3_grid_export", roles).power_role == PowerRole::Produced);
  CHECK(parse_heading("DE_KN_residential3_grid_import", roles).power_role == PowerRole::Consumed);
}

TEST_CASE("canonical form inverts parsing") {
  const RoleTable roles = RoleTable::defaults();
  SystemDescriptor d;
  d.country = "DE";
  d.locality = "KN";
  d.site_kind = SiteKind::Industrial;
  d.site_ordinal = 1;
  d.device_kind = "pv";
  d.device_ordinal = 1;
  d.power_role = PowerRole::Produced;
  CHECK(canonical_heading(d) == "DE_KN_industrial1_pv_1");

  SystemDescriptor g;
  g.country = "DE";
  g.locality = "KN";
  g.site_kind = SiteKind::Residential;
  g.site_ordinal = 3;
  g.device_kind = "grid_import";
  g.power_role = PowerRole::Consumed;
  CHECK(canonical_heading(g) == "DE_KN_residential3_grid_import");

  for (const char* text : {"DE_KN_industrial1_pv_1", "DE_KN_residential1_pv",
                           "DE_KN_public2_grid_import", "DE_KN_industrial3_area_room_4"}) {
    CHECK(canonical_heading(parse_heading(text, roles)) == text);
  }
}

TEST_CASE("round trip on randomized descriptors") {
  testgen::Rng rng(11);
  const RoleTable roles = RoleTable::defaults();
  for (int i = 0; i < 5000; ++i) {
    const SystemDescriptor d = testgen::random_descriptor(rng, roles);
    const std::string text = canonical_heading(d);
    const SystemDescriptor back = parse_heading(text, roles);
    CHECK(back == d);
    CHECK(canonical_heading(back) == text);
  }
}

TEST_CASE("round trip on the bundled fixture headers") {
  const RoleTable roles = RoleTable::defaults();
  for (const char* file : {"/fixtures/energy_month.csv", "/fixtures/energy_24x3.csv"}) {
    const EnergyTable table =
        read_energy_table_file(std::string(ENERGYKG_SOURCE_DIR) + file);
    REQUIRE(!table.headings.empty());
    for (const auto& heading : table.headings) {
      const SystemDescriptor d = parse_heading(heading, roles);
      CHECK(canonical_heading(d) == heading);
    }
  }
}

TEST_CASE("power_property reflects the role") {
  const TermRegistry reg = TermRegistry::defaults();
  const Vocab vocab(reg);
  const RoleTable roles = RoleTable::defaults();
  CHECK(power_property(parse_heading("DE_KN_residential1_pv", roles), vocab) ==
        vocab.seas_producedElectricPower);
  CHECK(power_property(parse_heading("DE_KN_residential1_heat_pump", roles), vocab) ==
        vocab.seas_consumedElectricPower);
  CHECK(power_property(parse_heading("DE_KN_residential3_grid_export", roles), vocab) ==
        vocab.seas_producedElectricPower);
}

TEST_CASE("role table rejects ordinal-suffix ambiguity") {
  RoleTable t;
  t.set("pv", PowerRole::Produced);
  CHECK_THROWS_AS(t.set("pv_1", PowerRole::Produced), Error);
  t.set("pv_facade", PowerRole::Produced);  // non-digit suffix is fine
  RoleTable u;
  u.set("machine_3", PowerRole::Consumed);
  CHECK_THROWS_AS(u.set("machine", PowerRole::Consumed), Error);
  CHECK_THROWS_AS(u.set("Machine", PowerRole::Consumed), Error);
  CHECK_THROWS_AS(u.set("trailing_", PowerRole::Consumed), Error);
}

TEST_CASE("role table file loading") {
  const auto path = std::filesystem::temp_directory_path() / "energykg_roles_test.tsv";
  {
    std::ofstream out(path);
    out << "# custom roles\nwindmill\tproduced\ntoaster\tconsumed\n";
  }
  const RoleTable t = RoleTable::from_file(path);
  CHECK(t.role("windmill") == PowerRole::Produced);
  CHECK(t.role("toaster") == PowerRole::Consumed);
  CHECK_FALSE(t.role("pv").has_value());  // file tables are not merged with defaults
  const SystemDescriptor d = parse_heading("DE_KN_residential1_windmill", t);
  CHECK(d.power_role == PowerRole::Produced);
  {
    std::ofstream out(path);
    out << "windmill\tsometimes\n";
  }
  CHECK_THROWS_AS((void)RoleTable::from_file(path), Error);
  std::filesystem::remove(path);
}
