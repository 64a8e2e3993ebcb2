#include "recam/annotation_server.hpp"

#include "httplib.h"
#include "recam/error.hpp"

namespace recam {

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message, const std::string& reason) {
  send_json(res, status, {{"error", message}, {"reason", reason}});
}

}  // namespace

AnnotationServer::AnnotationServer(AnnotationStore& store)
    : store_(store), server_(std::make_unique<httplib::Server>()) {
  auto& srv = *server_;

  srv.Get("/api/questions/next", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string annotator = req.get_param_value("annotator");
    if (annotator.empty()) return send_error(res, 400, "annotator parameter is required", "missing_field");
    const auto id = store_.next_for(annotator);
    if (!id) {
      res.status = 204;
      return;
    }
    send_json(res, 200, question_payload(*id, store_.question(*id)));
  });

  srv.Get(R"(/api/questions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    try {
      send_json(res, 200, question_payload(id, store_.question(id)));
    } catch (const NotFoundError& e) {
      send_error(res, 404, e.what(), "unknown_question");
    }
  });

  srv.Post("/api/annotations", [this](const httplib::Request& req, httplib::Response& res) {
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::exception& e) {
      return send_error(res, 400, std::string("malformed JSON: ") + e.what(), "malformed_json");
    }
    try {
      const AnnotationRecord stored = store_.submit(record_from_json(body));
      send_json(res, 201, {{"status", "stored"}, {"record", to_json(stored)}});
    } catch (const NotFoundError& e) {
      send_error(res, 404, e.what(), "unknown_question");
    } catch (const ValidationError& e) {
      send_error(res, 400, e.what(), e.reason());
    } catch (const Error& e) {
      send_error(res, 500, e.what(), "storage");
    }
  });

  srv.Get("/api/export", [this](const httplib::Request&, httplib::Response& res) {
    std::string out;
    for (const auto& r : store_.records()) out += to_json(r).dump() + "\n";
    res.set_content(out, "application/x-ndjson");
  });

  srv.Get("/api/selection", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, to_json(store_.selection()));
  });
}

AnnotationServer::~AnnotationServer() = default;

int AnnotationServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = server_->bind_to_any_port(host);
    if (p < 0) throw ResourceError("cannot bind " + host);
    return p;
  }
  if (!server_->bind_to_port(host, port)) throw ResourceError("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

bool AnnotationServer::listen() { return server_->listen_after_bind(); }

void AnnotationServer::stop() { server_->stop(); }

bool AnnotationServer::running() const { return server_->is_running(); }

}  // namespace recam
