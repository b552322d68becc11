#pragma once

#include <string>
#include <vector>

#include "ubf/model.hpp"
#include "ubf/scene.hpp"

namespace ubf {

// Canonical scene file: ordered keys, shortest-round-trip doubles. Loading
// what was saved reproduces the Scene field-for-field, and identical scenes
// serialize to identical bytes.
std::string scene_to_json(const Scene& scene);
Scene scene_from_json(const std::string& text);
void save_scene_file(const Scene& scene, const std::string& path);
Scene read_scene_file(const std::string& path);

// Labeling export in the same feature format as ingest inputs: one feature
// per building with properties {id, label, stage, s1..s5}.
std::string labels_to_geojson(const Scene& scene, const std::vector<LabelState>& labels);

// Accepts the GeoJSON written above, or CSV keyed by building id
// (header: building_id,label or id,label). Returns labels aligned to
// scene.buildings; ids unknown to the scene raise UnknownIds (listing up to
// 20); buildings missing from the file come back Unlabeled.
std::vector<LabelState> read_labels_file(const Scene& scene, const std::string& path);
std::vector<LabelState> labels_from_geojson(const Scene& scene, const std::string& text,
                                            const std::string& origin);
std::vector<LabelState> labels_from_csv(const Scene& scene, const std::string& text,
                                        const std::string& origin);

// Single-record codecs; decode(encode(x)) == x field-for-field.
std::string to_json_string(const BuildingFootprint& b);
BuildingFootprint building_from_json_string(const std::string& text);
std::string to_json_string(const PoiRecord& p);
PoiRecord poi_from_json_string(const std::string& text);
std::string to_json_string(const Block& b);
Block block_from_json_string(const std::string& text);
std::string to_json_string(const LabelState& ls);
LabelState label_state_from_json_string(const std::string& text);

// Taxonomy round-trips through its TSV file format.
std::string taxonomy_to_tsv(const TaxonomyMap& taxonomy);

std::string read_text_file(const std::string& path);  // IoError on failure
void write_text_file(const std::string& path, const std::string& content);

}  // namespace ubf
