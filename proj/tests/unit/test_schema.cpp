#include <doctest.h>

#include <sstream>

#include "edgeids/errors.hpp"
#include "edgeids/schema.hpp"
#include "support/temp_dir.hpp"

using namespace edgeids;

namespace {

std::string schema_text(int features = 24) {
  std::string text;
  for (int f = 0; f < features; ++f) text += "col" + std::to_string(f) + " = feature\n";
  text += "attack = label-attack\n";
  text += "category = label-category\n";
  text += "subcategory = label-subcategory\n";
  return text;
}

} // namespace

TEST_CASE("schema parses roles and label maps") {
  std::istringstream in(schema_text() +
                        "junk = ignore\n"
                        "label.subcategory.tcp = DoS_TCP\n"
                        "label.category.ddos = DoS\n");
  const FeatureSchema schema = FeatureSchema::parse(in);
  CHECK(schema.feature_count() == 24);
  CHECK(schema.map_subcategory("TCP") == Subcategory::DoS_TCP);
  CHECK(schema.map_category("DDOS") == Category::DoS);
  // canonical names always map, case-insensitively
  CHECK(schema.map_category("reconnaissance") == Category::Reconnaissance);
  CHECK(schema.map_subcategory("theft_keylogging") == Subcategory::Theft_Keylogging);
  CHECK(FeatureSchema::map_attack("0") == 0);
  CHECK(FeatureSchema::map_attack("1") == 1);
  CHECK_THROWS_AS(schema.map_subcategory("unheard_of"), DataError);
}

TEST_CASE("schema invariants") {
  SUBCASE("wrong feature count") {
    std::istringstream in(schema_text(23));
    CHECK_THROWS_AS(FeatureSchema::parse(in), SchemaError);
  }
  SUBCASE("missing label role") {
    std::string text;
    for (int f = 0; f < 24; ++f) text += "col" + std::to_string(f) + " = feature\n";
    text += "attack = label-attack\ncategory = label-category\n";
    std::istringstream in(text);
    CHECK_THROWS_WITH_AS(FeatureSchema::parse(in),
                         doctest::Contains("label-subcategory"), SchemaError);
  }
  SUBCASE("duplicate source column") {
    std::istringstream in(schema_text() + "col0 = ignore\n");
    CHECK_THROWS_AS(FeatureSchema::parse(in), SchemaError);
  }
  SUBCASE("two attack labels") {
    std::istringstream in(schema_text() + "attack2 = label-attack\n");
    CHECK_THROWS_AS(FeatureSchema::parse(in), SchemaError);
  }
}

TEST_CASE("schema file round trip") {
  testutil::TempDir tmp;
  std::istringstream in(schema_text() + "label.subcategory.tcp = DoS_TCP\n");
  const FeatureSchema schema = FeatureSchema::parse(in);
  schema.save(tmp.file("schema.txt"));
  const FeatureSchema loaded = FeatureSchema::load(tmp.file("schema.txt"));
  CHECK(loaded.columns == schema.columns);
  CHECK(loaded.map_subcategory("tcp") == Subcategory::DoS_TCP);
}

TEST_CASE("derive_schema ranks numeric columns by variance") {
  testutil::TempDir tmp;
  // 26 numeric candidates; c00 and c01 are constant, so they lose the
  // variance ranking. pkSeqID/saddr look like identifiers and are excluded.
  std::string csv = "pkSeqID,saddr";
  for (int c = 0; c < 26; ++c) csv += ",c" + std::to_string(c / 10) + std::to_string(c % 10);
  csv += ",attack,category,subcategory\n";
  for (int r = 0; r < 50; ++r) {
    csv += std::to_string(r) + ",text";
    for (int c = 0; c < 26; ++c) {
      const int v = c < 2 ? 7 : (r * (c + 3)) % 97;
      csv += "," + std::to_string(v);
    }
    csv += ",0,Normal,Normal\n";
  }
  const std::string path = tmp.write("flows.csv", csv);
  const FeatureSchema schema = derive_schema(path, "attack", "category", "subcategory");
  CHECK(schema.feature_count() == 24);
  const auto names = schema.feature_names();
  for (const auto& n : names) {
    CHECK(n != "c00");
    CHECK(n != "c01");
    CHECK(n != "pkSeqID");
    CHECK(n != "saddr");
  }
}
