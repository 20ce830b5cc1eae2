#include <gtest/gtest.h>

#include <httplib.h>

#include <map>
#include <set>

#include "fixtures.hpp"
#include "forge/annotation/server.hpp"
#include "forge/annotation/store.hpp"
#include "forge/dataset/conversion.hpp"
#include "forge/eval/templates.hpp"

using namespace forge;
using namespace forge::annotation;
using testkit::make_character;

namespace {

/// 20 held-out questions, two agents, all eight metrics.
struct PairWorld {
  Character tomas = make_character("Tomas Brandt");
  Character nell = make_character("Nell Ashdown");
  std::vector<ImageRecord> images;
  std::vector<Dialogue> dialogues;
  Corpus corpus;
  std::vector<TestSample> samples;
  std::map<std::pair<std::string, std::string>, std::string> responses;
  std::vector<PairSource> pairs;

  explicit PairWorld(std::size_t questions = 20) {
    for (std::size_t i = 0; i < questions; ++i) {
      images.push_back(testkit::generic_image("img/q" + std::to_string(i) + ".jpg"));
      dialogues.push_back(testkit::human_role(i % 2 ? tomas : nell, images.back(), 4, Split::InTest));
    }
    corpus = Corpus({tomas, nell}, images, dialogues);
    const auto templates = eval::AgentTemplates::original();
    for (const auto& d : dialogues) samples.push_back(dataset::to_test_sample(d, d.speaker_b, 3, corpus, templates));
    for (const auto& s : samples) {
      responses[{s.id, "agent-a"}] = "first reply to " + s.id;
      responses[{s.id, "agent-b"}] = "second reply to " + s.id;
      pairs.push_back({s.id, "agent-a", "agent-b"});
    }
  }

  std::vector<AnnotationTask> tasks(bool ground_truth = true) const {
    TaskBuildOptions opt;
    opt.seed = 11;
    opt.show_ground_truth = ground_truth;
    return build_pair_tasks(pairs, responses, samples, corpus, opt);
  }
};

JudgmentRecord judgment(const std::string& task, const std::string& annotator, const std::string& verdict,
                        std::optional<std::string> patch = std::nullopt) {
  return {task, annotator, verdict, std::move(patch), ""};
}

}  // namespace

TEST(AnnotationTasks, OnePerQuestionAndMetric) {
  const PairWorld w;
  const auto tasks = w.tasks();
  EXPECT_EQ(tasks.size(), 160u);
  std::set<std::string> ids;
  for (const auto& t : tasks) ids.insert(t.id);
  EXPECT_EQ(ids.size(), 160u);
  const auto again = w.tasks();
  for (std::size_t i = 0; i < tasks.size(); ++i) EXPECT_EQ(to_json(again[i]), to_json(tasks[i]));
}

TEST(AnnotationTasks, PayloadIsBlind) {
  const PairWorld w;
  std::size_t flipped = 0;
  for (const auto& t : w.tasks()) {
    const auto text = AnnotationStore::public_view(t).dump();
    EXPECT_EQ(text.find("agent-a"), std::string::npos);
    EXPECT_EQ(text.find("agent-b"), std::string::npos);
    ASSERT_TRUE(t.blinding);
    EXPECT_EQ(t.payload.at("response_1").get<std::string>(),
              w.responses.at({t.question_id, t.blinding->agent_1}));
    if (t.blinding->agent_1 == "agent-b") ++flipped;
  }
  // Order is drawn per task, so both orders show up.
  EXPECT_GT(flipped, 0u);
  EXPECT_LT(flipped, 160u);
}

TEST(AnnotationTasks, GroundTruthToggle) {
  const PairWorld w(2);
  EXPECT_TRUE(w.tasks(true)[0].payload.contains("ground_truth"));
  EXPECT_FALSE(w.tasks(false)[0].payload.contains("ground_truth"));
}

TEST(AnnotationTasks, MissingResponse) {
  PairWorld w(2);
  w.responses.erase({w.samples[0].id, "agent-b"});
  EXPECT_ERRC(w.tasks(), Errc::InsufficientData);
}

TEST(AnnotationTasks, PairsFromRewardRows) {
  const std::vector<json> rows = {{{"sample_id", "q1"}, {"agent_id", "z"}},
                                  {{"sample_id", "q1"}, {"agent_id", "a"}},
                                  {{"sample_id", "q1"}, {"agent_id", "m"}},
                                  {{"sample_id", "q2"}, {"agent_id", "a"}},
                                  {{"sample_id", "q2"}, {"agent_id", "b"}}};
  const auto pairs = pairs_from_reward_rows(rows);
  ASSERT_EQ(pairs.size(), 4u);
  EXPECT_EQ(pairs[0].question_id, "q1");
  EXPECT_LT(pairs[0].agent_a, pairs[0].agent_b);
}

TEST(AnnotationTasks, CodecRoundTrip) {
  const PairWorld w(1);
  for (const auto& t : w.tasks()) {
    const auto back = task_from_json(to_json(t));
    EXPECT_EQ(to_json(back), to_json(t));
  }
}

TEST(AnnotationStore, EachTaskServedOncePerAnnotator) {
  const PairWorld w;
  AnnotationStore store(w.tasks(), std::nullopt, 4, 3);
  const auto a = store.register_annotator("a");
  const auto b = store.register_annotator("b");
  std::map<std::string, std::set<std::string>> seen;
  for (const auto& who : {a.annotator_id, b.annotator_id}) {
    while (auto t = store.next_task(who)) {
      EXPECT_TRUE(seen[who].insert(t->id).second) << "served twice: " << t->id;
      store.submit(judgment(t->id, who, "Equal"));
    }
  }
  EXPECT_EQ(seen[a.annotator_id].size(), 160u);
  EXPECT_EQ(seen[a.annotator_id], seen[b.annotator_id]);
  EXPECT_FALSE(store.next_task(a.annotator_id));
  const auto p = store.progress();
  EXPECT_EQ(p.judgments, 320u);
  EXPECT_EQ(p.open, 160u);
  EXPECT_EQ(p.annotators, 2u);
}

TEST(AnnotationStore, PendingTaskIsServedAgain) {
  const PairWorld w(2);
  AnnotationStore store(w.tasks());
  const auto a = store.register_annotator("a");
  const auto first = store.next_task(a.annotator_id);
  ASSERT_TRUE(first);
  EXPECT_EQ(store.next_task(a.annotator_id)->id, first->id);
}

TEST(AnnotationStore, QueueCyclesThroughMetrics) {
  const PairWorld w(3);
  AnnotationStore store(w.tasks());
  const auto a = store.register_annotator("a");
  std::set<eval::Metric> metrics;
  for (int i = 0; i < 8; ++i) {
    const auto t = store.next_task(a.annotator_id);
    ASSERT_TRUE(t);
    metrics.insert(*t->metric);
    store.submit(judgment(t->id, a.annotator_id, "Better"));
  }
  EXPECT_EQ(metrics.size(), 8u);
}

TEST(AnnotationStore, RequiredJudgmentsCloseTask) {
  const PairWorld w(1);
  AnnotationStore store(w.tasks(), std::nullopt, 2);
  std::vector<std::string> people;
  for (int i = 0; i < 3; ++i) people.push_back(store.register_annotator("p").annotator_id);
  for (int i = 0; i < 2; ++i) {
    while (auto t = store.next_task(people[static_cast<std::size_t>(i)])) {
      store.submit(judgment(t->id, people[static_cast<std::size_t>(i)], "Worse"));
    }
  }
  EXPECT_FALSE(store.next_task(people[2]));
  EXPECT_EQ(store.progress().done, 8u);
}

TEST(AnnotationStore, Errors) {
  const PairWorld w(1);
  AnnotationStore store(w.tasks());
  const auto a = store.register_annotator("a");
  const auto id = w.tasks()[0].id;
  store.submit(judgment(id, a.annotator_id, "Better"));
  EXPECT_ERRC(store.submit(judgment(id, a.annotator_id, "Worse")), Errc::DuplicateJudgment);
  EXPECT_ERRC(store.submit(judgment("task_0000000000000000", a.annotator_id, "Better")), Errc::UnknownTask);
  EXPECT_ERRC(store.submit(judgment(id, "ann-999", "Better")), Errc::Unauthorized);
  EXPECT_ERRC(store.next_task("ann-999"), Errc::Unauthorized);
  EXPECT_ERRC(store.submit(judgment(w.tasks()[1].id, a.annotator_id, "Approve")), Errc::InvalidArgument);
  EXPECT_ERRC(store.submit(judgment(w.tasks()[1].id, a.annotator_id, "Better", "x")), Errc::InvalidArgument);
  EXPECT_FALSE(store.authenticate("not-a-token"));
  EXPECT_EQ(*store.authenticate(a.token), a.annotator_id);
}

TEST(AnnotationStore, ReviewVerdicts) {
  const auto base = testkit::small_corpus();
  const auto& tomas = base.characters()[0];
  const auto& nell = base.characters()[1];
  const Corpus corpus(base.characters(), base.images(),
                      {testkit::human_role(tomas, base.images()[0], 4),
                       testkit::inter_role(tomas, nell, base.images()[1], 3, true)});
  const auto tasks = build_review_tasks(corpus);
  EXPECT_EQ(tasks.size(), corpus.characters().size() + corpus.dialogues().size());
  AnnotationStore store(tasks);
  const auto a = store.register_annotator("a");
  const auto dialogue_task =
      std::find_if(tasks.begin(), tasks.end(), [](const auto& t) { return t.kind == TaskKind::DialogueReview; });
  const auto profile_task =
      std::find_if(tasks.begin(), tasks.end(), [](const auto& t) { return t.kind == TaskKind::ProfileReview; });
  ASSERT_NE(dialogue_task, tasks.end());
  ASSERT_NE(profile_task, tasks.end());

  EXPECT_ERRC(store.submit(judgment(dialogue_task->id, a.annotator_id, "Edit")), Errc::InvalidArgument);
  EXPECT_ERRC(store.submit(judgment(dialogue_task->id, a.annotator_id, "Approve", "x")), Errc::InvalidArgument);
  EXPECT_ERRC(store.submit(judgment(dialogue_task->id, a.annotator_id, "Better")), Errc::InvalidArgument);
  store.submit(judgment(dialogue_task->id, a.annotator_id, "Edit", "Tomas Brandt: fixed line"));
  store.submit(judgment(profile_task->id, a.annotator_id, "Reject"));

  const auto out = store.export_judgments();
  EXPECT_TRUE(out.comparisons.empty());
  ASSERT_EQ(out.reviews.size(), 2u);
  for (const auto& row : out.reviews) {
    if (row.at("task_id") == dialogue_task->id) {
      EXPECT_EQ(row.at("patched_text"), "Tomas Brandt: fixed line");
      EXPECT_EQ(row.at("original_text"), dialogue_task->original_text);
      EXPECT_EQ(row.at("verdict"), "Edit");
    } else {
      EXPECT_FALSE(row.contains("patched_text"));
    }
  }
}

TEST(AnnotationStore, ExportUnblindsToSortedAgents) {
  const PairWorld w(1);
  const auto tasks = w.tasks();
  AnnotationStore store(tasks);
  std::vector<std::string> people;
  for (int i = 0; i < 4; ++i) people.push_back(store.register_annotator("p").annotator_id);
  // Better, Better, Equal, Worse from agent-a's side whatever the shown order.
  for (const auto& t : tasks) {
    const bool a_first = t.blinding->agent_1 == "agent-a";
    const std::vector<std::string> verdicts = a_first ? std::vector<std::string>{"Better", "Better", "Equal", "Worse"}
                                                      : std::vector<std::string>{"Worse", "Worse", "Equal", "Better"};
    for (std::size_t i = 0; i < 4; ++i) store.submit(judgment(t.id, people[i], verdicts[i]));
  }
  const auto out = store.export_judgments();
  ASSERT_EQ(out.comparisons.size(), 8u);
  for (const auto& c : out.comparisons) {
    EXPECT_EQ(c.agent_a, "agent-a");
    EXPECT_EQ(c.agent_b, "agent-b");
    EXPECT_EQ(c.judgments.size(), 4u);
    EXPECT_NEAR(c.gap(), 0.1, 1e-12);
  }
}

TEST(AnnotationStore, ReplaysFromDisk) {
  const PairWorld w(2);
  const auto dir = testkit::scratch_dir("annotation-replay");
  Registration a;
  {
    AnnotationStore store(w.tasks(), dir);
    a = store.register_annotator("a");
    for (int i = 0; i < 5; ++i) {
      const auto t = store.next_task(a.annotator_id);
      store.submit(judgment(t->id, a.annotator_id, "Equal"));
    }
  }
  AnnotationStore again(w.tasks(), dir);
  EXPECT_EQ(*again.authenticate(a.token), a.annotator_id);
  EXPECT_EQ(again.judgments().size(), 5u);
  std::size_t left = 0;
  while (auto t = again.next_task(a.annotator_id)) {
    again.submit(judgment(t->id, a.annotator_id, "Equal"));
    ++left;
  }
  EXPECT_EQ(left, 11u);
  const auto second = again.register_annotator("b");
  EXPECT_NE(second.annotator_id, a.annotator_id);
  std::filesystem::remove_all(dir);
}

// ------------------------------------------------------------------ HTTP

class AnnotationHttp : public ::testing::Test {
 protected:
  void SetUp() override {
    store = std::make_unique<AnnotationStore>(world.tasks(), std::nullopt, 2);
    server = std::make_unique<AnnotationServer>(*store, ServerOptions{"127.0.0.1", 0, "admin-secret", std::nullopt});
    port = server->bind();
    server->start();
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
  }
  void TearDown() override { server->stop(); }

  httplib::Headers auth(const std::string& token) { return {{"Authorization", "Bearer " + token}}; }

  Registration enroll(const std::string& name) {
    const auto res = client->Post("/register", json{{"name", name}}.dump(), "application/json");
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, 201);
    const auto body = json::parse(res->body);
    return {body.at("annotator_id"), body.at("token")};
  }

  PairWorld world{2};
  std::unique_ptr<AnnotationStore> store;
  std::unique_ptr<AnnotationServer> server;
  std::unique_ptr<httplib::Client> client;
  int port = 0;
};

TEST_F(AnnotationHttp, RoundTrip) {
  std::vector<Registration> people = {enroll("a"), enroll("b")};
  std::set<std::string> served;
  for (const auto& p : people) {
    for (;;) {
      const auto res = client->Get(("/tasks/next?annotator=" + p.annotator_id).c_str(), auth(p.token));
      ASSERT_TRUE(res);
      ASSERT_EQ(res->status, 200);
      const auto task = json::parse(res->body);
      if (task.contains("status")) {
        EXPECT_EQ(task.at("status"), "none_remaining");
        break;
      }
      EXPECT_EQ(res->body.find("agent-"), std::string::npos);
      served.insert(task.at("task_id").get<std::string>());
      const auto post = client->Post("/judgments", auth(p.token),
                                     json{{"task_id", task.at("task_id")}, {"verdict", "Better"}}.dump(),
                                     "application/json");
      ASSERT_TRUE(post);
      EXPECT_EQ(post->status, 201);
      EXPECT_EQ(json::parse(post->body).at("ack"), true);
    }
  }
  EXPECT_EQ(served.size(), 16u);

  const auto progress = client->Get("/progress");
  ASSERT_TRUE(progress);
  const auto p = json::parse(progress->body);
  EXPECT_EQ(p.at("judgments"), 32);
  EXPECT_EQ(p.at("done"), 16);

  const auto exported = client->Get("/export", auth("admin-secret"));
  ASSERT_TRUE(exported);
  ASSERT_EQ(exported->status, 200);
  const auto body = json::parse(exported->body);
  ASSERT_EQ(body.at("comparisons").size(), 16u);
  for (const auto& c : body.at("comparisons")) {
    const auto comparison = agreement::human_comparison_from_json(c);
    EXPECT_EQ(comparison.judgments.size(), 2u);
    EXPECT_NEAR(std::abs(comparison.gap()), 0.4, 1e-12);
  }
}

TEST_F(AnnotationHttp, ErrorStatuses) {
  const auto a = enroll("a");
  const auto none = client->Get("/tasks/next");
  ASSERT_TRUE(none);
  EXPECT_EQ(none->status, 401);
  EXPECT_EQ(client->Get("/tasks/next", auth("bogus"))->status, 401);
  EXPECT_EQ(client->Get("/tasks/next?annotator=ann-999", auth(a.token))->status, 401);

  const auto unknown = client->Post("/judgments", auth(a.token),
                                    json{{"task_id", "task_none"}, {"verdict", "Better"}}.dump(), "application/json");
  EXPECT_EQ(unknown->status, 404);
  EXPECT_EQ(json::parse(unknown->body).at("error"), "UnknownTask");

  const auto task = json::parse(client->Get("/tasks/next", auth(a.token))->body);
  const auto body = json{{"task_id", task.at("task_id")}, {"verdict", "Equal"}}.dump();
  EXPECT_EQ(client->Post("/judgments", auth(a.token), body, "application/json")->status, 201);
  EXPECT_EQ(client->Post("/judgments", auth(a.token), body, "application/json")->status, 409);

  const auto other = json::parse(client->Get("/tasks/next", auth(a.token))->body);
  const auto bad_verdict = json{{"task_id", other.at("task_id")}, {"verdict", "Maybe"}}.dump();
  EXPECT_EQ(client->Post("/judgments", auth(a.token), bad_verdict, "application/json")->status, 400);
  EXPECT_EQ(client->Post("/judgments", auth(a.token), "{not json", "application/json")->status, 400);

  EXPECT_EQ(client->Get("/export")->status, 401);
  EXPECT_EQ(client->Get("/export", auth(a.token))->status, 401);
}

TEST_F(AnnotationHttp, MetricsListing) {
  const auto res = client->Get("/metrics");
  ASSERT_TRUE(res);
  const auto body = json::parse(res->body);
  ASSERT_EQ(body.size(), 8u);
  EXPECT_EQ(body[0].at("id"), "IA");
  EXPECT_FALSE(body[0].at("definition").get<std::string>().empty());
}
