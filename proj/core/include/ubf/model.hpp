#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ubf {

// ---------------------------------------------------------------------------
// Function classes
// ---------------------------------------------------------------------------

// The five building function classes. The integer encoding (1..5) is fixed
// and used for serialization and for all deterministic tie-breaking.
enum class FunctionClass : int {
  Residential = 1,
  Commercial = 2,
  PublicServices = 3,
  TechnologyIndustry = 4,
  EducationalCultural = 5,
};

inline constexpr int kNumClasses = 5;

inline constexpr std::array<FunctionClass, kNumClasses> kAllClasses = {
    FunctionClass::Residential,       FunctionClass::Commercial,
    FunctionClass::PublicServices,    FunctionClass::TechnologyIndustry,
    FunctionClass::EducationalCultural,
};

constexpr int class_encoding(FunctionClass c) { return static_cast<int>(c); }
// 0-based index into 5-vectors.
constexpr int class_index(FunctionClass c) { return static_cast<int>(c) - 1; }

FunctionClass class_from_encoding(int encoding);  // throws InvalidParams
std::string_view class_name(FunctionClass c);
// Accepts class names ("Commercial") or encodings ("2").
std::optional<FunctionClass> class_from_string(std::string_view s);

// ---------------------------------------------------------------------------
// Planar geometry value types (operations live in geometry.hpp)
// ---------------------------------------------------------------------------

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

// Open vertex list: the closing edge last->first is implicit.
struct Ring {
  std::vector<Point> vertices;
  bool operator==(const Ring&) const = default;
};

struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
  bool operator==(const Polygon&) const = default;
};

struct BoundingBox {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  bool contains(Point p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  bool intersects(const BoundingBox& o) const {
    return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y && o.min_y <= max_y;
  }
  BoundingBox padded(double pad) const {
    return {min_x - pad, min_y - pad, max_x + pad, max_y + pad};
  }
  bool operator==(const BoundingBox&) const = default;
};

// ---------------------------------------------------------------------------
// Class score vectors
// ---------------------------------------------------------------------------

// Ordered 5-vector of non-negative reals indexed by FunctionClass.
struct ClassScores {
  std::array<double, kNumClasses> values{};

  double& operator[](FunctionClass c) { return values[class_index(c)]; }
  double operator[](FunctionClass c) const { return values[class_index(c)]; }

  double sum() const;
  bool all_zero() const;
  bool all_finite_nonnegative() const;
  // Highest-scoring class; ties broken by lowest class encoding.
  FunctionClass argmax() const;

  bool operator==(const ClassScores&) const = default;
};

// ---------------------------------------------------------------------------
// Domain records
// ---------------------------------------------------------------------------

struct BuildingFootprint {
  std::string id;
  Polygon polygon;
  Point centroid;  // area centroid, derived at ingest
  std::optional<std::string> block_id;

  bool operator==(const BuildingFootprint&) const = default;
};

struct PoiRecord {
  std::string id;
  Point location;
  std::string raw_category;
  FunctionClass function_class = FunctionClass::Residential;
  bool is_high_level = false;
  std::optional<double> buffer_radius;  // meters, required when is_high_level

  bool operator==(const PoiRecord&) const = default;
};

struct Block {
  std::string id;
  Polygon polygon;
  std::array<std::int64_t, kNumClasses> poi_counts{};
  std::int64_t total_pois = 0;

  bool operator==(const Block&) const = default;
};

// ---------------------------------------------------------------------------
// Label state
// ---------------------------------------------------------------------------

enum class LabelStage : int {
  Candidate = 1,
  Refined = 2,
  Corrected = 3,
  External = 4,
};

std::string_view stage_name(LabelStage s);
std::optional<LabelStage> stage_from_string(std::string_view s);

struct LabelState {
  std::string building_id;
  std::optional<FunctionClass> label;  // nullopt = Unlabeled
  LabelStage stage = LabelStage::Candidate;
  std::optional<ClassScores> score_vector;

  bool unlabeled() const { return !label.has_value(); }
  bool operator==(const LabelState&) const = default;
};

// ---------------------------------------------------------------------------
// Taxonomy mapping
// ---------------------------------------------------------------------------

enum class DropReason { Excluded, Unknown };

// Result of mapping a raw source category: either a class or a drop reason.
struct CategoryMapping {
  std::optional<FunctionClass> mapped;
  DropReason drop_reason = DropReason::Unknown;

  bool dropped() const { return !mapped.has_value(); }
};

// Map from raw POI source categories to the five classes. Lookup keys are
// case-normalized and whitespace-trimmed. A raw category of the form
// "primary/secondary" is first looked up verbatim, then by its primary
// segment, so users can split an ambiguous primary by qualifier.
class TaxonomyMap {
 public:
  // Built-in default derived from the Baidu primary-category table.
  static const TaxonomyMap& default_map();
  // Loads a TSV mapping file: "raw_category<TAB>TargetClass|EXCLUDE".
  static TaxonomyMap load(const std::string& path);
  static TaxonomyMap parse(std::string_view text, const std::string& origin);

  void add(std::string_view raw, FunctionClass target);  // throws on conflicts
  void exclude(std::string_view raw);

  CategoryMapping map_category(std::string_view raw) const;

  std::size_t entry_count() const { return entries_.size(); }
  std::size_t excluded_count() const { return excluded_.size(); }
  const std::map<std::string, FunctionClass>& entries() const { return entries_; }
  const std::set<std::string>& excluded() const { return excluded_; }

  bool operator==(const TaxonomyMap&) const = default;

 private:
  std::map<std::string, FunctionClass> entries_;  // canonical keys
  std::set<std::string> excluded_;                // canonical keys
};

// Canonical key form used by TaxonomyMap: trimmed, lower-cased, inner
// whitespace runs collapsed to single spaces.
std::string canonical_category(std::string_view raw);

CategoryMapping map_category(std::string_view raw, const TaxonomyMap& taxonomy);

}  // namespace ubf
