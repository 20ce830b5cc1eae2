#include <gtest/gtest.h>

#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "fixtures.hpp"
#include "forge/backend/chat.hpp"
#include "forge/backend/client.hpp"
#include "forge/backend/http_backend.hpp"
#include "forge/backend/registry.hpp"
#include "forge/backend/scripted.hpp"
#include "forge/util/jsonl.hpp"

using namespace forge;
using namespace forge::backend;

namespace {

ChatRequest hello(const std::string& tag = "t") { return make_request("sys", "Say hello", std::nullopt, tag); }

}  // namespace

TEST(Chat, TagIsExcludedFromDigest) {
  EXPECT_EQ(request_digest(hello("a")), request_digest(hello("b")));
  auto other = hello();
  other.temperature = 0.5;
  EXPECT_NE(request_digest(hello()), request_digest(other));
}

TEST(Chat, ValidateRequest) {
  ChatRequest r;
  EXPECT_ERRC(validate_request(r), Errc::InvalidArgument);
  r = hello();
  r.max_output_chars = 0;
  EXPECT_ERRC(validate_request(r), Errc::InvalidArgument);
}

TEST(Scripted, LookupByDigest) {
  auto b = scripted_backend({{request_digest(hello()), "Hello"}});
  auto h = testkit::make_handle(b);
  const auto rec = complete(*h, hello());
  EXPECT_EQ(rec.outcome, Outcome::Ok);
  EXPECT_EQ(rec.response, "Hello");
  EXPECT_EQ(rec.attempts, 1);
  EXPECT_EQ(complete(*h, hello("different tag")).response, "Hello");
}

TEST(Scripted, FailTwiceThenSucceed) {
  auto b = std::make_shared<ScriptedBackend>();
  b->set(request_digest(hello()), ScriptEntry{"Hello", 2, Outcome::TransportError});
  auto h = testkit::make_handle(b, 3);
  const auto rec = complete(*h, hello());
  EXPECT_EQ(rec.outcome, Outcome::Ok);
  EXPECT_EQ(rec.attempts, 3);
}

TEST(Scripted, AlwaysFailingStopsAtBound) {
  auto b = std::make_shared<ScriptedBackend>();
  b->set(request_digest(hello()), ScriptEntry::always_failing(Outcome::TransportError));
  auto h = testkit::make_handle(b, 2);
  const auto rec = complete(*h, hello());
  EXPECT_EQ(rec.outcome, Outcome::TransportError);
  EXPECT_EQ(rec.attempts, 2);
  EXPECT_ERRC(require_ok(rec), Errc::BackendError);
}

TEST(Scripted, RefusalIsNotRetried) {
  auto b = std::make_shared<ScriptedBackend>();
  b->set(request_digest(hello()), ScriptEntry::always_failing(Outcome::Refused));
  auto h = testkit::make_handle(b, 5);
  EXPECT_EQ(complete(*h, hello()).attempts, 1);
}

TEST(Scripted, EmptyScriptIsMissingEntry) {
  auto h = testkit::make_handle(std::make_shared<ScriptedBackend>());
  EXPECT_ERRC(complete(*h, hello()), Errc::MissingScriptEntry);
}

TEST(Scripted, RecordingWritesReplayableScript) {
  const auto dir = testkit::scratch_dir("recording");
  auto inner = std::make_shared<testkit::FnBackend>([](const ChatRequest& r) { return "echo " + r.request_tag; });
  auto rec = std::make_shared<RecordingBackend>(inner);
  auto h = testkit::make_handle(rec);
  complete(*h, hello("x"));
  complete(*h, make_request("sys", "Another", std::nullopt, "y"));
  rec->write_script(dir / "s.jsonl");
  auto replay = ScriptedBackend::from_file(dir / "s.jsonl");
  EXPECT_EQ(replay->size(), 2u);
  auto h2 = testkit::make_handle(replay);
  EXPECT_EQ(complete(*h2, hello("x")).response, "echo x");
}

TEST(Retry, BackoffIsExponentialAndCapped) {
  RetryPolicy p;
  p.initial_backoff = std::chrono::milliseconds(100);
  p.max_backoff = std::chrono::milliseconds(350);
  EXPECT_EQ(p.backoff_after(1).count(), 100);
  EXPECT_EQ(p.backoff_after(2).count(), 200);
  EXPECT_EQ(p.backoff_after(3).count(), 350);
}

TEST(Retry, SleepsBetweenAttempts) {
  auto b = std::make_shared<ScriptedBackend>();
  b->set(request_digest(hello()), ScriptEntry{"ok", 2, Outcome::Timeout});
  std::vector<long> slept;
  RetryPolicy p;
  p.sleep = [&](std::chrono::milliseconds d) { slept.push_back(static_cast<long>(d.count())); };
  BackendHandle h("b", b, p);
  EXPECT_TRUE(complete(h, hello()).ok());
  EXPECT_EQ(slept, (std::vector<long>{250, 500}));
}

TEST(BackendRecordCodec, RoundTrip) {
  BackendRecord r{"writer", "tag", "digest", "text", 1.5, 2, Outcome::Ok, ""};
  const auto back = backend_record_from_json(to_json(r));
  EXPECT_EQ(back.response, "text");
  EXPECT_EQ(back.attempts, 2);
  EXPECT_EQ(back.outcome, Outcome::Ok);
}

TEST(Registry, RejectsInlineCredentials) {
  BackendRegistry reg;
  EXPECT_ERRC(reg.build_one("x", json{{"kind", "http"}, {"endpoint", "http://h/v1"}, {"model", "m"}, {"api_key", "s"}},
                            "."),
              Errc::ConfigError);
  EXPECT_ERRC(reg.build_one("x", json{{"kind", "nope"}}, "."), Errc::ConfigError);
  EXPECT_ERRC(reg.build_one("x", json{{"kind", "scripted"}}, "."), Errc::ConfigError);
}

TEST(Registry, MissingEnvironmentVariable) {
  ::unsetenv("FORGE_TEST_UNSET_KEY");
  BackendRegistry reg;
  EXPECT_ERRC(reg.build_one("x",
                            json{{"kind", "http"},
                                 {"endpoint", "http://127.0.0.1:1/v1/chat/completions"},
                                 {"model", "m"},
                                 {"api_key_env", "FORGE_TEST_UNSET_KEY"}},
                            "."),
              Errc::ConfigError);
}

TEST(Registry, CustomKind) {
  BackendRegistry reg;
  reg.register_kind("fn", [](const json&, const FactoryContext& ctx) {
    return std::make_shared<testkit::FnBackend>([name = ctx.name](const ChatRequest&) { return name; });
  });
  auto handles = reg.build(json{{"a", {{"kind", "fn"}}}, {"b", {{"kind", "fn"}}}}, ".");
  EXPECT_EQ(complete(*handles.at("b"), hello()).response, "b");
}

TEST(Http, StatusMapping) {
  EXPECT_EQ(outcome_for_status(200), Outcome::Ok);
  EXPECT_EQ(outcome_for_status(408), Outcome::Timeout);
  EXPECT_EQ(outcome_for_status(429), Outcome::TransportError);
  EXPECT_EQ(outcome_for_status(503), Outcome::TransportError);
  EXPECT_EQ(outcome_for_status(400), Outcome::Refused);
}

TEST(Http, CompletesAgainstLocalEndpoint) {
  httplib::Server server;
  std::string seen_auth;
  json seen_body;
  int calls = 0;
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    ++calls;
    seen_auth = req.get_header_value("Authorization");
    seen_body = json::parse(req.body);
    if (calls == 1) {
      res.status = 503;
      return;
    }
    res.set_content(R"({"choices":[{"message":{"content":"Aye."},"finish_reason":"stop"}]})", "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  ::setenv("FORGE_TEST_KEY", "sk-test", 1);
  BackendRegistry reg;
  RetryPolicy retry;
  retry.sleep = [](std::chrono::milliseconds) {};
  auto h = reg.build_one("remote",
                         json{{"kind", "http"},
                              {"endpoint", "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions"},
                              {"model", "tiny"},
                              {"api_key_env", "FORGE_TEST_KEY"}},
                         ".", retry);
  const auto rec = complete(*h, hello());
  server.stop();
  t.join();
  EXPECT_EQ(rec.outcome, Outcome::Ok);
  EXPECT_EQ(rec.response, "Aye.");
  EXPECT_EQ(rec.attempts, 2);
  EXPECT_EQ(seen_auth, "Bearer sk-test");
  EXPECT_EQ(seen_body["model"], "tiny");
  EXPECT_EQ(seen_body["messages"][0]["role"], "system");
}

TEST(BackendLogFile, AppendsJsonl) {
  const auto dir = testkit::scratch_dir("backend-log");
  {
    BackendLog log(dir / "log.jsonl", true);
    log.append(BackendRecord{"a", "t1", "d", "r", 0, 1, Outcome::Ok, ""});
    log.append(std::vector<BackendRecord>{{"a", "t2", "d", "r", 0, 1, Outcome::Ok, ""}});
  }
  const auto rows = read_jsonl(dir / "log.jsonl");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1]["request_tag"], "t2");
}
