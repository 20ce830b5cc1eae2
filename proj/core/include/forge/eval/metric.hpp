#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace forge::eval {

enum class Metric { IA, Flu, Coh, ITR, RA, PC, KC, TC };
enum class Dimension { Conversational, Multimodal, RolePlaying };

/// Canonical order used in prompts, trajectories and score tables.
inline constexpr std::array<Metric, 8> kAllMetrics = {Metric::IA, Metric::Flu, Metric::Coh, Metric::ITR,
                                                      Metric::RA, Metric::PC,  Metric::KC,  Metric::TC};

std::string_view to_string(Metric m);
std::string_view full_name(Metric m);
std::string_view to_string(Dimension d);
Dimension dimension(Metric m);
/// Short definition shown to judges and annotators.
std::string_view definition(Metric m);
std::size_t metric_index(Metric m);

/// Accepts the abbreviation or the full name, case-insensitively.
std::optional<Metric> find_metric(std::string_view s);
/// As find_metric but throws SchemaError.
Metric parse_metric(std::string_view s);

}  // namespace forge::eval
