#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace forge::demo {

struct DemoSummary {
  std::filesystem::path config;
  std::size_t script_entries = 0;
  std::size_t human_comparisons = 0;
};

/// Writes a self-contained demo project into `out`: input characters,
/// images and a source text, scripted backends recorded from the simulator,
/// human comparisons for the held-out questions, and config.json. Running
/// `forge run -c <out>/config.json -s <seed>` replays it offline. The
/// scripts only cover requests made with this seed.
DemoSummary write_demo(const std::filesystem::path& out, std::uint64_t seed = 7);

}  // namespace forge::demo
