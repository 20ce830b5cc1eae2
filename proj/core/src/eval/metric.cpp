#include "forge/eval/metric.hpp"

#include "forge/util/error.hpp"
#include "forge/util/text.hpp"

namespace forge::eval {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::IA: return "IA";
    case Metric::Flu: return "Flu";
    case Metric::Coh: return "Coh";
    case Metric::ITR: return "ITR";
    case Metric::RA: return "RA";
    case Metric::PC: return "PC";
    case Metric::KC: return "KC";
    case Metric::TC: return "TC";
  }
  return "?";
}

std::string_view full_name(Metric m) {
  switch (m) {
    case Metric::IA: return "Instruction Adherence";
    case Metric::Flu: return "Fluency";
    case Metric::Coh: return "Coherency";
    case Metric::ITR: return "Image-Text Relevance";
    case Metric::RA: return "Response Accuracy";
    case Metric::PC: return "Personality Consistency";
    case Metric::KC: return "Knowledge Consistency";
    case Metric::TC: return "Tone Consistency";
  }
  return "?";
}

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::Conversational: return "Conversational";
    case Dimension::Multimodal: return "Multimodal";
    case Dimension::RolePlaying: return "RolePlaying";
  }
  return "?";
}

Dimension dimension(Metric m) {
  switch (m) {
    case Metric::IA:
    case Metric::Flu:
    case Metric::Coh: return Dimension::Conversational;
    case Metric::ITR:
    case Metric::RA: return Dimension::Multimodal;
    default: return Dimension::RolePlaying;
  }
}

std::string_view definition(Metric m) {
  switch (m) {
    case Metric::IA: return "Does the reply stay in role and follow the instructions it was given?";
    case Metric::Flu: return "Is the reply grammatical, readable and natural?";
    case Metric::Coh: return "Does the reply follow logically from the conversation so far?";
    case Metric::ITR: return "Does the reply engage with what the image actually shows?";
    case Metric::RA: return "Does the reply answer what was asked, or open the exchange sensibly?";
    case Metric::PC: return "Does the reply show the character's known temperament and attitudes?";
    case Metric::KC: return "Is the reply consistent with what the character would know and has lived through?";
    case Metric::TC: return "Does the reply sound like the character, including habitual phrasing and catchphrases?";
  }
  return "";
}

std::size_t metric_index(Metric m) { return static_cast<std::size_t>(m); }

std::optional<Metric> find_metric(std::string_view s) {
  const auto key = text::to_lower_ascii(text::trim(s));
  for (Metric m : kAllMetrics) {
    if (key == text::to_lower_ascii(to_string(m)) || key == text::to_lower_ascii(full_name(m))) return m;
  }
  if (key == "image text relevance") return Metric::ITR;
  if (key == "coherence") return Metric::Coh;
  return std::nullopt;
}

Metric parse_metric(std::string_view s) {
  if (auto m = find_metric(s)) return *m;
  throw Error(Errc::SchemaError, "unknown metric '" + std::string(s) + "'");
}

}  // namespace forge::eval
