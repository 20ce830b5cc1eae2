#pragma once

#include <memory>
#include <string>

#include "forge/backend/chat.hpp"
#include "forge/backend/registry.hpp"

namespace forge::demo {

/// Offline stand-in for a chat model. Replies are synthesized from the
/// request tag and a hash of the request digest, so they are deterministic
/// and shaped like what each pipeline stage expects: "gen.*" tags get
/// profiles, meta lists and transcripts, "agent/*" tags in-character
/// answers, and "judge/*" tags scored assessments whose values depend on
/// agent_quality().
///
/// A judge with `sloppiness` > 0 answers some requests in loose markdown
/// and some with missing metrics, exercising the lenient parser and the
/// failure accounting.
class SimulatedBackend final : public backend::ChatBackend {
 public:
  struct Options {
    double sloppiness = 0.0;
    /// Spread of the judge's scores around the shared "true" score.
    int noise = 0;
  };

  explicit SimulatedBackend(Options options);

  backend::AttemptResult send(const backend::ChatRequest& request, const std::string& digest) override;
  std::string kind() const override { return "simulated"; }

 private:
  Options options_;
};

/// Registers kind "simulated" ({"sloppiness", "noise"}).
void register_simulator(backend::BackendRegistry& registry);

/// Quality the simulated judges assign to an agent name: names containing
/// "alpha" score best, "gamma" worst.
double agent_quality(const std::string& agent);

}  // namespace forge::demo
