#include <cctype>
#include <fstream>
#include <sstream>

#include "ubf/errors.hpp"
#include "ubf/model.hpp"

namespace ubf {

std::string canonical_category(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char ch : raw) {
    const unsigned char u = static_cast<unsigned char>(ch);
    if (std::isspace(u)) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(u)));
  }
  return out;
}

void TaxonomyMap::add(std::string_view raw, FunctionClass target) {
  const std::string key = canonical_category(raw);
  if (key.empty()) {
    raise(ErrorCode::InvalidParams, "taxonomy entry with empty raw category");
  }
  if (excluded_.count(key) > 0) {
    raise(ErrorCode::InvalidParams,
          "taxonomy category is both mapped and excluded: " + key);
  }
  auto [it, inserted] = entries_.emplace(key, target);
  if (!inserted && it->second != target) {
    raise(ErrorCode::InvalidParams,
          "conflicting taxonomy targets for category: " + key);
  }
}

void TaxonomyMap::exclude(std::string_view raw) {
  const std::string key = canonical_category(raw);
  if (key.empty()) {
    raise(ErrorCode::InvalidParams, "taxonomy exclusion with empty raw category");
  }
  if (entries_.count(key) > 0) {
    raise(ErrorCode::InvalidParams,
          "taxonomy category is both mapped and excluded: " + key);
  }
  excluded_.insert(key);
}

CategoryMapping TaxonomyMap::map_category(std::string_view raw) const {
  std::string key = canonical_category(raw);
  for (int pass = 0; pass < 2; ++pass) {
    if (auto it = entries_.find(key); it != entries_.end()) {
      return {it->second, DropReason::Unknown};
    }
    if (excluded_.count(key) > 0) {
      return {std::nullopt, DropReason::Excluded};
    }
    // Fall back from "primary/secondary" to the primary segment.
    const auto slash = key.find('/');
    if (slash == std::string::npos) break;
    key = canonical_category(key.substr(0, slash));
  }
  return {std::nullopt, DropReason::Unknown};
}

CategoryMapping map_category(std::string_view raw, const TaxonomyMap& taxonomy) {
  return taxonomy.map_category(raw);
}

namespace {

TaxonomyMap build_default_map() {
  TaxonomyMap m;
  // Residential
  m.add("Real Estate", FunctionClass::Residential);
  // Commercial
  m.add("Food", FunctionClass::Commercial);
  m.add("Hotel", FunctionClass::Commercial);
  m.add("Shopping", FunctionClass::Commercial);
  m.add("Life Services", FunctionClass::Commercial);
  m.add("Beauty Services", FunctionClass::Commercial);
  m.add("Recreation Center", FunctionClass::Commercial);
  m.add("Sports and Fitness Center", FunctionClass::Commercial);
  m.add("Car Services", FunctionClass::Commercial);
  m.add("Financial Industry", FunctionClass::Commercial);
  // Public services
  m.add("Culture and Media", FunctionClass::PublicServices);
  m.add("Government Agencies", FunctionClass::PublicServices);
  m.add("Transportation", FunctionClass::PublicServices);
  m.add("Healthcare", FunctionClass::PublicServices);
  m.add("Tourist Attractions", FunctionClass::PublicServices);
  // Technology and industry
  m.add("Companies and Enterprises", FunctionClass::TechnologyIndustry);
  // Educational and cultural
  m.add("Education and Training Venue", FunctionClass::EducationalCultural);
  // Source-taxonomy aliases mapped to their nearest row above.
  m.add("Dining", FunctionClass::Commercial);
  m.add("Hotels", FunctionClass::Commercial);
  m.add("Leisure and Entertainment", FunctionClass::Commercial);
  m.add("Sports and Fitness", FunctionClass::Commercial);
  m.add("Cycling Services", FunctionClass::Commercial);
  m.add("Finance", FunctionClass::Commercial);
  m.add("Medical Care", FunctionClass::PublicServices);
  m.add("Transportation Facilities", FunctionClass::PublicServices);
  m.add("Education and Training", FunctionClass::EducationalCultural);
  // Non-building categories.
  m.exclude("Entrances/Exits");
  m.exclude("Roads");
  m.exclude("Natural Features");
  return m;
}

}  // namespace

const TaxonomyMap& TaxonomyMap::default_map() {
  static const TaxonomyMap instance = build_default_map();
  return instance;
}

TaxonomyMap TaxonomyMap::parse(std::string_view text, const std::string& origin) {
  TaxonomyMap m;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      raise(ErrorCode::ParseError, origin + ":" + std::to_string(lineno) +
                                       ": expected 'raw_category<TAB>Target'");
    }
    const std::string raw = line.substr(0, tab);
    std::string target = line.substr(tab + 1);
    // Allow trailing comments after the target column.
    if (auto hash = target.find('#'); hash != std::string::npos) {
      target = target.substr(0, hash);
    }
    while (!target.empty() && (target.back() == ' ' || target.back() == '\t')) target.pop_back();
    while (!target.empty() && (target.front() == ' ' || target.front() == '\t')) target.erase(target.begin());
    if (target == "EXCLUDE") {
      m.exclude(raw);
    } else if (auto cls = class_from_string(target)) {
      m.add(raw, *cls);
    } else {
      raise(ErrorCode::ParseError, origin + ":" + std::to_string(lineno) +
                                       ": unknown target class '" + target + "'");
    }
  }
  if (m.entry_count() == 0) {
    raise(ErrorCode::ParseError, origin + ": taxonomy file has no entries");
  }
  return m;
}

TaxonomyMap TaxonomyMap::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(ErrorCode::IoError, "cannot open taxonomy file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

}  // namespace ubf
