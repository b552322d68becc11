#include "ubf/model.hpp"

#include <cmath>

#include "ubf/errors.hpp"

namespace ubf {

FunctionClass class_from_encoding(int encoding) {
  if (encoding < 1 || encoding > kNumClasses) {
    raise(ErrorCode::InvalidParams,
          "function class encoding out of range [1,5]: " + std::to_string(encoding));
  }
  return static_cast<FunctionClass>(encoding);
}

std::string_view class_name(FunctionClass c) {
  switch (c) {
    case FunctionClass::Residential: return "Residential";
    case FunctionClass::Commercial: return "Commercial";
    case FunctionClass::PublicServices: return "PublicServices";
    case FunctionClass::TechnologyIndustry: return "TechnologyIndustry";
    case FunctionClass::EducationalCultural: return "EducationalCultural";
  }
  return "?";
}

std::optional<FunctionClass> class_from_string(std::string_view s) {
  for (FunctionClass c : kAllClasses) {
    if (s == class_name(c)) return c;
  }
  if (s.size() == 1 && s[0] >= '1' && s[0] <= '5') {
    return static_cast<FunctionClass>(s[0] - '0');
  }
  return std::nullopt;
}

std::string_view stage_name(LabelStage s) {
  switch (s) {
    case LabelStage::Candidate: return "Candidate";
    case LabelStage::Refined: return "Refined";
    case LabelStage::Corrected: return "Corrected";
    case LabelStage::External: return "External";
  }
  return "?";
}

std::optional<LabelStage> stage_from_string(std::string_view s) {
  for (LabelStage st : {LabelStage::Candidate, LabelStage::Refined,
                        LabelStage::Corrected, LabelStage::External}) {
    if (s == stage_name(st)) return st;
  }
  return std::nullopt;
}

double ClassScores::sum() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

bool ClassScores::all_zero() const {
  for (double v : values) {
    if (v != 0.0) return false;
  }
  return true;
}

bool ClassScores::all_finite_nonnegative() const {
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) return false;
  }
  return true;
}

FunctionClass ClassScores::argmax() const {
  int best = 0;
  for (int i = 1; i < kNumClasses; ++i) {
    if (values[i] > values[best]) best = i;
  }
  return static_cast<FunctionClass>(best + 1);
}

}  // namespace ubf
