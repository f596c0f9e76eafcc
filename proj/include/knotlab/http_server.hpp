#pragma once

#include <iostream>
#include <stdexcept>
#include <string>

// Eigen must come first: httplib pulls in <resolv.h>, whose _res macro
// collides with parameter names inside Eigen.
#include "knotlab/service.hpp"

#include <httplib.h>

namespace knotlab {

/// Binds `svc` to an HTTP listener. The browser playground is served from a
/// different origin, so every response allows cross-origin reads.
inline void install_routes(httplib::Server &server, Service &svc) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  const auto forward = [&svc](const httplib::Request &req, httplib::Response &res) {
    auto r = svc.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server.Get(".*", forward);
  server.Post(".*", forward);
  server.Options(".*", [](const httplib::Request &, httplib::Response &res) { res.status = 204; });
}

/// Runs until the process is stopped. Port or directory problems are fatal.
inline void serve(const ServiceConfig &cfg) {
  Service svc(cfg);
  httplib::Server server;
  install_routes(server, svc);
  if (!server.bind_to_port(cfg.host, cfg.port))
    throw std::runtime_error("cannot listen on " + cfg.host + ":" + std::to_string(cfg.port));
  std::cerr << "knotlab: serving on http://" << cfg.host << ":" << cfg.port << " (" << svc.session_count()
            << " sessions restored from " << cfg.session_dir.string() << ")\n";
  server.listen_after_bind();
}

} // namespace knotlab
