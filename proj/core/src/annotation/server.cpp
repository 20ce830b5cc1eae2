#include "forge/annotation/server.hpp"

#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "forge/util/error.hpp"

namespace forge::annotation {

namespace {

int status_for(Errc code) {
  switch (code) {
    case Errc::Unauthorized: return 401;
    case Errc::UnknownTask: return 404;
    case Errc::DuplicateJudgment: return 409;
    default: return 400;
  }
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e) {
  send_json(res, status_for(e.code()), {{"error", to_string(e.code())}, {"message", e.what()}});
}

std::string bearer(const httplib::Request& req) {
  const auto header = req.get_header_value("Authorization");
  constexpr std::string_view kPrefix = "Bearer ";
  if (header.compare(0, kPrefix.size(), kPrefix) != 0) return {};
  return header.substr(kPrefix.size());
}

}  // namespace

struct AnnotationServer::Impl {
  AnnotationStore& store;
  ServerOptions options;
  httplib::Server server;
  std::thread thread;
  int port = -1;

  Impl(AnnotationStore& s, ServerOptions o) : store(s), options(std::move(o)) { routes(); }

  std::string caller(const httplib::Request& req) const {
    const auto id = store.authenticate(bearer(req));
    if (!id) throw Error(Errc::Unauthorized, "missing or unknown bearer token");
    return *id;
  }

  template <typename F>
  auto handler(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const Error& e) {
        send_error(res, e);
      } catch (const json::exception& e) {
        send_json(res, 400, {{"error", "InvalidArgument"}, {"message", e.what()}});
      }
    };
  }

  void routes() {
    server.Post("/register", handler([this](const httplib::Request& req, httplib::Response& res) {
                  const auto body = req.body.empty() ? json::object() : json::parse(req.body);
                  const auto reg = store.register_annotator(body.value("name", std::string()));
                  send_json(res, 201, {{"annotator_id", reg.annotator_id}, {"token", reg.token}});
                }));

    server.Get("/tasks/next", handler([this](const httplib::Request& req, httplib::Response& res) {
                 const auto id = caller(req);
                 if (req.has_param("annotator") && req.get_param_value("annotator") != id) {
                   throw Error(Errc::Unauthorized, "token does not belong to this annotator");
                 }
                 const auto task = store.next_task(id);
                 if (!task) {
                   send_json(res, 200, {{"status", "none_remaining"}});
                   return;
                 }
                 send_json(res, 200, AnnotationStore::public_view(*task));
               }));

    server.Post("/judgments", handler([this](const httplib::Request& req, httplib::Response& res) {
                  const auto id = caller(req);
                  const auto body = json::parse(req.body);
                  JudgmentRecord r;
                  r.task_id = body.at("task_id").get<std::string>();
                  r.annotator_id = id;
                  r.verdict = body.at("verdict").get<std::string>();
                  if (body.contains("patched_text") && !body.at("patched_text").is_null()) {
                    r.patched_text = body.at("patched_text").get<std::string>();
                  }
                  store.submit(std::move(r));
                  send_json(res, 201, {{"ack", true}});
                }));

    server.Get("/export", handler([this](const httplib::Request& req, httplib::Response& res) {
                 if (options.admin_token.empty() || bearer(req) != options.admin_token) {
                   throw Error(Errc::Unauthorized, "export needs the admin token");
                 }
                 const auto exported = store.export_judgments();
                 json comparisons = json::array();
                 for (const auto& c : exported.comparisons) comparisons.push_back(agreement::to_json(c));
                 send_json(res, 200, {{"comparisons", comparisons}, {"reviews", exported.reviews}});
               }));

    server.Get("/progress", handler([this](const httplib::Request&, httplib::Response& res) {
                 const auto p = store.progress();
                 send_json(res, 200,
                           {{"tasks", p.tasks}, {"open", p.open}, {"done", p.done}, {"judgments", p.judgments},
                            {"annotators", p.annotators}});
               }));

    server.Get("/metrics", handler([](const httplib::Request&, httplib::Response& res) {
                 json out = json::array();
                 for (const auto m : eval::kAllMetrics) {
                   out.push_back({{"id", eval::to_string(m)},
                                  {"name", eval::full_name(m)},
                                  {"dimension", eval::to_string(eval::dimension(m))},
                                  {"definition", eval::definition(m)}});
                 }
                 send_json(res, 200, out);
               }));

    if (options.ui_dir && std::filesystem::is_directory(*options.ui_dir)) {
      server.set_mount_point("/ui", options.ui_dir->string());
    }
  }
};

AnnotationServer::AnnotationServer(AnnotationStore& store, ServerOptions options)
    : impl_(std::make_unique<Impl>(store, std::move(options))) {}

AnnotationServer::~AnnotationServer() { stop(); }

int AnnotationServer::bind() {
  if (impl_->options.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(impl_->options.host);
  } else {
    impl_->port = impl_->server.bind_to_port(impl_->options.host, impl_->options.port) ? impl_->options.port : -1;
  }
  if (impl_->port < 0) throw Error(Errc::IoError, "cannot bind " + impl_->options.host);
  return impl_->port;
}

void AnnotationServer::start() {
  if (impl_->port < 0) bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void AnnotationServer::serve() {
  if (impl_->port < 0) bind();
  spdlog::info("annotation service listening on {}:{}", impl_->options.host, impl_->port);
  impl_->server.listen_after_bind();
}

void AnnotationServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace forge::annotation
