#include <httplib.h>

#include <atomic>

#include "hrc/error.hpp"
#include "hrc/hitl.hpp"

namespace hrc::hitl {

namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& type, const std::string& message) {
  send_json(res, status, {{"error", {{"type", type}, {"message", message}}}});
}

// Maps library errors onto HTTP statuses.
template <class F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const NotFoundError& e) {
    send_error(res, 404, "not_found", e.what());
  } catch (const ConflictError& e) {
    send_error(res, 409, "conflict", e.what());
  } catch (const ValidationError& e) {
    send_error(res, 422, "validation", e.what());
  } catch (const LoadError& e) {
    send_error(res, 400, "invalid_config", e.what());
  } catch (const Json::exception& e) {
    send_error(res, 400, "bad_json", e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "internal", e.what());
  }
}

Json body_of(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  return Json::parse(req.body);
}

}  // namespace

struct HttpServer::Impl {
  explicit Impl(Service& s) : svc(s) {}
  Service& svc;
  httplib::Server server;
  std::atomic<bool> stopping{false};
};

HttpServer::HttpServer(Service& s) : impl_(std::make_unique<Impl>(s)) {
  auto& srv = impl_->server;
  auto* impl = impl_.get();
  Service& svc = s;

  srv.Post("/v1/sessions", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto id = svc.create_session(body_of(req));
      send_json(res, 201, {{"session_id", id}, {"state", svc.state(id)}});
    });
  });
  srv.Get(R"(/v1/sessions/([0-9a-f]+))", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, svc.state(req.matches[1])); });
  });
  srv.Post(R"(/v1/sessions/([0-9a-f]+)/turn)", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, svc.submit_turn(req.matches[1], body_of(req))); });
  });
  srv.Post(R"(/v1/sessions/([0-9a-f]+)/feedback)", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, svc.submit_feedback(req.matches[1], body_of(req))); });
  });
  srv.Get(R"(/v1/sessions/([0-9a-f]+)/candidates)", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, svc.candidates(req.matches[1], req.get_param_value("q"))); });
  });

  // Server-sent events. Each subscriber keeps its own cursor, so every event
  // reaches every subscriber once. `Last-Event-ID` or `?after=` resumes.
  srv.Get(R"(/v1/sessions/([0-9a-f]+)/events)", [&svc, impl](const httplib::Request& req, httplib::Response& res) {
    std::string id = req.matches[1];
    guarded(res, [&] {
      svc.state(id);  // 404 before the stream starts
      std::uint64_t after = 0;
      if (req.has_header("Last-Event-ID")) after = std::stoull(req.get_header_value("Last-Event-ID"));
      if (req.has_param("after")) after = std::stoull(req.get_param_value("after"));
      auto cursor = std::make_shared<std::uint64_t>(after);
      res.set_header("Cache-Control", "no-cache");
      res.set_chunked_content_provider(
          "text/event-stream", [&svc, impl, id, cursor](std::size_t, httplib::DataSink& sink) {
            if (impl->stopping) return false;
            auto batch = svc.events(id, *cursor, std::chrono::milliseconds(500));
            if (batch.empty()) {
              // Comment line as a keep-alive; also detects closed clients.
              static const std::string ping = ": keep-alive\n\n";
              return impl->stopping ? false : sink.write(ping.data(), ping.size());
            }
            for (const auto& e : batch) {
              auto chunk = "id: " + std::to_string(e.seq) + "\nevent: " + e.type + "\ndata: " + e.data.dump() + "\n\n";
              if (!sink.write(chunk.data(), chunk.size())) return false;
              *cursor = e.seq;
            }
            return true;
          });
    });
  });
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int HttpServer::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  impl_->stopping = true;
  impl_->svc.shutdown();
  impl_->server.stop();
}

}  // namespace hrc::hitl
