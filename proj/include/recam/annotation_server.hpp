#pragma once

#include <memory>
#include <string>

#include "recam/annotation.hpp"

namespace httplib {
class Server;
}

namespace recam {

// HTTP JSON API over an AnnotationStore:
//   GET  /api/questions/next?annotator=ID
//   GET  /api/questions/{id}
//   POST /api/annotations
//   GET  /api/export
//   GET  /api/selection
class AnnotationServer {
 public:
  explicit AnnotationServer(AnnotationStore& store);
  ~AnnotationServer();

  // Returns the bound port; 0 binds any free port.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen();
  void stop();
  bool running() const;

 private:
  AnnotationStore& store_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace recam
