#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "ubf/errors.hpp"
#include "ubf/model.hpp"
#include "ubf/rng.hpp"
#include "ubf/serialize.hpp"

using namespace ubf;

TEST_CASE("function class encoding is total, stable, 1..5") {
  REQUIRE(kNumClasses == 5);
  CHECK(class_encoding(FunctionClass::Residential) == 1);
  CHECK(class_encoding(FunctionClass::Commercial) == 2);
  CHECK(class_encoding(FunctionClass::PublicServices) == 3);
  CHECK(class_encoding(FunctionClass::TechnologyIndustry) == 4);
  CHECK(class_encoding(FunctionClass::EducationalCultural) == 5);
  for (FunctionClass c : kAllClasses) {
    CHECK(class_from_encoding(class_encoding(c)) == c);
    CHECK(class_from_string(class_name(c)) == c);
  }
  CHECK_THROWS_AS(class_from_encoding(0), Error);
  CHECK_THROWS_AS(class_from_encoding(6), Error);
  CHECK(!class_from_string("Industrial").has_value());
}

TEST_CASE("default taxonomy maps the published categories") {
  const TaxonomyMap& map = TaxonomyMap::default_map();
  CHECK(map.map_category("Real Estate").mapped == FunctionClass::Residential);
  CHECK(map.map_category("Education and Training Venue").mapped ==
        FunctionClass::EducationalCultural);
  CHECK(map.map_category("Companies and Enterprises").mapped ==
        FunctionClass::TechnologyIndustry);
  CHECK(map.map_category("Healthcare").mapped == FunctionClass::PublicServices);
  // Listed under two types in the source table; the default resolves to
  // Commercial (qualifiers allow splitting).
  CHECK(map.map_category("Life Services").mapped == FunctionClass::Commercial);

  const auto natural = map.map_category("natural features");
  CHECK(natural.dropped());
  CHECK(natural.drop_reason == DropReason::Excluded);
  const auto roads = map.map_category("roads");
  CHECK(roads.dropped());
  CHECK(roads.drop_reason == DropReason::Excluded);

  const auto unknown = map.map_category("spaceport");
  CHECK(unknown.dropped());
  CHECK(unknown.drop_reason == DropReason::Unknown);
}

TEST_CASE("lookup is case-normalized and whitespace-trimmed") {
  const TaxonomyMap& map = TaxonomyMap::default_map();
  CHECK(map.map_category("  REAL   estate ").mapped == FunctionClass::Residential);
  CHECK(map.map_category("SHOPPING").mapped == FunctionClass::Commercial);
  CHECK(canonical_category("  A  b\tC ") == "a b c");
}

TEST_CASE("secondary-category qualifiers fall back to the primary segment") {
  const TaxonomyMap& map = TaxonomyMap::default_map();
  CHECK(map.map_category("Life Services/Housekeeping").mapped == FunctionClass::Commercial);

  TaxonomyMap split;
  split.add("Life Services/Housekeeping", FunctionClass::PublicServices);
  split.add("Life Services", FunctionClass::Commercial);
  CHECK(split.map_category("Life Services/Housekeeping").mapped ==
        FunctionClass::PublicServices);
  CHECK(split.map_category("Life Services/Laundry").mapped == FunctionClass::Commercial);
}

TEST_CASE("every class appears as a target in the default map") {
  const TaxonomyMap& map = TaxonomyMap::default_map();
  std::array<bool, kNumClasses> seen{};
  for (const auto& [raw, cls] : map.entries()) seen[class_index(cls)] = true;
  for (bool s : seen) CHECK(s);
}

TEST_CASE("mapped and excluded sets stay disjoint") {
  TaxonomyMap m;
  m.add("shops", FunctionClass::Commercial);
  CHECK_THROWS_AS(m.exclude("shops"), Error);
  m.exclude("rivers");
  CHECK_THROWS_AS(m.add("rivers", FunctionClass::Commercial), Error);
  CHECK_THROWS_AS(m.add("shops", FunctionClass::Residential), Error);
}

TEST_CASE("taxonomy round-trips through the TSV format") {
  const TaxonomyMap& map = TaxonomyMap::default_map();
  const TaxonomyMap parsed = TaxonomyMap::parse(taxonomy_to_tsv(map), "roundtrip");
  CHECK(parsed == map);
}

TEST_CASE("shipped taxonomy file reproduces the built-in default") {
  const TaxonomyMap loaded = TaxonomyMap::load(std::string(UBF_DATA_DIR) +
                                               "/default_taxonomy.tsv");
  CHECK(loaded == TaxonomyMap::default_map());
}

TEST_CASE("taxonomy TSV parse errors carry positions") {
  CHECK_THROWS_AS(TaxonomyMap::parse("Shops Commercial\n", "bad"), Error);
  CHECK_THROWS_AS(TaxonomyMap::parse("Shops\tRetail\n", "bad"), Error);
  CHECK_THROWS_AS(TaxonomyMap::parse("# only comments\n", "bad"), Error);
}

TEST_CASE("class scores argmax breaks ties toward the lowest encoding") {
  ClassScores s;
  s.values = {1.0, 1.0, 0.5, 1.0, 0.2};
  CHECK(s.argmax() == FunctionClass::Residential);
  s.values = {0.0, 2.0, 2.0, 0.0, 0.0};
  CHECK(s.argmax() == FunctionClass::Commercial);
  CHECK(ClassScores{}.all_zero());
  CHECK(s.sum() == doctest::Approx(4.0));
}

TEST_CASE("serialization round-trips every model type field-for-field") {
  SplitMix64 rng(20250810);
  for (int trial = 0; trial < 50; ++trial) {
    BuildingFootprint b = test_support::rect_building(
        "b" + std::to_string(trial), rng.next_range(0, 100), rng.next_range(0, 100),
        rng.next_range(101, 200), rng.next_range(101, 200));
    if (trial % 3 == 0) b.block_id = "blk" + std::to_string(trial);
    if (trial % 4 == 0) {
      Ring hole;
      hole.vertices = {{120.0, 120.0}, {130.0, 120.0}, {125.0, 130.0}};
      b.polygon.holes.push_back(hole);
    }
    CHECK(building_from_json_string(to_json_string(b)) == b);

    PoiRecord p = test_support::poi_at(
        "p" + std::to_string(trial), rng.next_range(-50, 50), rng.next_range(-50, 50),
        kAllClasses[rng.next_below(kNumClasses)], trial % 5 == 0,
        rng.next_range(1, 400));
    p.raw_category = "Category " + std::to_string(rng.next_below(1000));
    CHECK(poi_from_json_string(to_json_string(p)) == p);

    Block blk;
    blk.id = "blk" + std::to_string(trial);
    blk.polygon = test_support::rect_building("x", 0, 0, 10, 10).polygon;
    for (int c = 0; c < kNumClasses; ++c) {
      blk.poi_counts[c] = static_cast<std::int64_t>(rng.next_below(100));
      blk.total_pois += blk.poi_counts[c];
    }
    CHECK(block_from_json_string(to_json_string(blk)) == blk);

    LabelState ls;
    ls.building_id = b.id;
    if (trial % 6 != 0) ls.label = kAllClasses[rng.next_below(kNumClasses)];
    ls.stage = static_cast<LabelStage>(1 + rng.next_below(4));
    if (trial % 2 == 0) {
      ClassScores sv;
      for (int c = 0; c < kNumClasses; ++c) sv.values[c] = rng.next_double();
      ls.score_vector = sv;
    }
    CHECK(label_state_from_json_string(to_json_string(ls)) == ls);
  }
}

TEST_CASE("label state unlabeled only with absent or all-zero scores") {
  LabelState ls;
  CHECK(ls.unlabeled());
  ls.score_vector = ClassScores{};
  CHECK(ls.score_vector->all_zero());
  ls.label = FunctionClass::Commercial;
  CHECK(!ls.unlabeled());
}
