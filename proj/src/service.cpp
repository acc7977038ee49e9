#include "energykg/service.hpp"

#include <charconv>

#include <httplib.h>

#include "energykg/error.hpp"

namespace energykg {

namespace {

void answer(const Graph& graph, const TermRegistry& registry, const std::string& text,
            httplib::Response& res) {
  try {
    const Query q = parse_query(text, registry);
    const ResultSet rs = evaluate(graph, q);
    res.status = 200;
    res.set_content(results_json(rs), "application/sparql-results+json");
  } catch (const Error& e) {
    // Both unsupported-feature and malformed-query errors are the client's
    // problem.
    res.status = 400;
    res.set_content(std::string(e.what()) + "\n", "text/plain");
  }
}

}  // namespace

void attach_query_endpoints(httplib::Server& server, const Graph& graph,
                            const TermRegistry& registry) {
  server.Get("/", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("energykg query service; GET or POST /query\n", "text/plain");
  });
  server.Get("/query", [&graph, &registry](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("query")) {
      res.status = 400;
      res.set_content("missing 'query' parameter\n", "text/plain");
      return;
    }
    answer(graph, registry, req.get_param_value("query"), res);
  });
  server.Post("/query", [&graph, &registry](const httplib::Request& req, httplib::Response& res) {
    // Expected media type is application/sparql-query; the body is treated
    // as query text regardless, matching the tolerant behaviour of common
    // endpoints.
    answer(graph, registry, req.body, res);
  });
}

void run_query_service(const Graph& graph, const TermRegistry& registry,
                       const std::string& host, int port) {
  httplib::Server server;
  attach_query_endpoints(server, graph, registry);
  if (!server.bind_to_port(host, port))
    fail(ErrorKind::Usage, "cannot bind " + host + ":" + std::to_string(port));
  if (!server.listen_after_bind())
    fail(ErrorKind::Usage, "listen failed on " + host + ":" + std::to_string(port));
}

std::pair<std::string, int> parse_listen_address(const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == listen.size())
    fail(ErrorKind::Usage, "--listen expects HOST:PORT, got '" + listen + "'");
  const std::string host = listen.substr(0, colon);
  const std::string port_text = listen.substr(colon + 1);
  int port = 0;
  const auto res = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (res.ec != std::errc() || res.ptr != port_text.data() + port_text.size() || port <= 0 ||
      port > 65535)
    fail(ErrorKind::Usage, "bad port in '" + listen + "'");
  return {host, port};
}

}  // namespace energykg
